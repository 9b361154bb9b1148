//! Knowledge bases shipped with the crate, as `.ckb` source text.

/// A plant whose parts come and go with the seasons (time in days).
pub const COLCHIQUE: &str = include_str!("../samples/colchique.ckb");
/// Three diseases told apart by fever and cough.
pub const MALADIES: &str = include_str!("../samples/maladies.ckb");
/// Observation of a patient with a 40 °C fever, checked against [`MALADIES`].
pub const PATIENT: &str = include_str!("../samples/patient.ckb");
/// A door with a lock and a car door inheriting it.
pub const PORTE: &str = include_str!("../samples/porte.ckb");
/// A pencil and an eraser, ready to be composed.
pub const STYLO: &str = include_str!("../samples/stylo.ckb");

/// Every sample knowledge base with its file name.
pub const ALL: [(&str, &str); 4] = [
    ("colchique.ckb", COLCHIQUE),
    ("maladies.ckb", MALADIES),
    ("porte.ckb", PORTE),
    ("stylo.ckb", STYLO),
];
