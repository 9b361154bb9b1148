//! The ten acceptance criteria. Each one prints a PASS/FAIL line with its
//! runtime and budget; the test fails if any criterion fails or overruns.

mod support;

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use ckb_core::dsl::{self, parse_kb, serialize_kb};
use ckb_core::dynamics::{snapshot, timeline_csv, Snapshot};
use ckb_core::evaluation::{distance, eval_global, rank_candidates, scale_factor};
use ckb_core::graph::{
    apply_user_update, inherited_attributes, node_schema, validate_instance, zoom,
};
use ckb_core::{
    class_of, compose_types, is_subtype, render, resolve_effective_schema, samples, send,
    AttributeDef, Cardinality, Domain, ExactKb, Kb, KnowledgeBase, Message, NodePath,
    ObjectInstance, PartSlot, QualifiedName, Rational64, Scalar, Target, TimeFunction, TypeDef,
    Value,
};
use rand::Rng;
use support::{Gen, Shape};

fn q(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn abs<S: Scalar>(x: S) -> S {
    x.abs()
}

fn path(s: &str) -> NodePath {
    s.parse().unwrap()
}

fn c1_fever_formula() {
    let f = scale_factor(&q(39), &q(34), &q(44)).unwrap();
    assert_eq!(f, q(20));
    assert_eq!(distance(&q(40), &q(39), &f).percent, q(20));
    assert_eq!(distance(&q(39), &q(39), &f).percent, q(0));
    assert_eq!(distance(&q(44), &q(39), &f).percent, q(100));
    let f = scale_factor(&39.0_f64, &34.0, &44.0).unwrap();
    assert!((f - 20.0).abs() <= 1e-9);
    assert!((distance(&40.0, &39.0, &f).percent - 20.0).abs() <= 1e-9);
}

fn c2_colchique_seasons() {
    let kb: Kb = parse_kb(samples::COLCHIQUE).unwrap();
    let plant = kb.instance("colchique1").unwrap();
    let schema = resolve_effective_schema(&kb, "Colchique").unwrap();
    let fd1 = &schema.part("Tubercule").unwrap().slot.reliability;
    let fd4 = &schema.part("Fleur").unwrap().slot.reliability;
    assert_eq!(fd1, &TimeFunction::Constant(100.0));
    for name in ["Feuilles", "Capsule", "Fleur"] {
        assert!(
            schema
                .part(name)
                .unwrap()
                .slot
                .reliability
                .period()
                .is_some(),
            "{name}"
        );
    }
    let qualifying = ["Fleur.Perianthe.couleur", "Fleur.Etamines.nombre"];
    for (t, flowering) in [(15.0, false), (105.0, false), (196.0, false), (270.0, true)] {
        let snap = snapshot(&kb, plant, &t).unwrap();
        assert!(snap.is_present(&path("Tubercule")), "t={t}");
        assert_eq!(snap.is_present(&path("Fleur")), flowering, "t={t}");
    }
    let mut t = -365.0;
    while t < 730.0 {
        let snap = snapshot(&kb, plant, &t).unwrap();
        let day = t.rem_euclid(365.0);
        let window = (240.0..300.0).contains(&day);
        assert_eq!(snap.is_present(&path("Fleur")), window, "t={t}");
        let open = fd4.reliability(&t) > 0.0;
        assert_eq!(open, window, "t={t}");
        for name in qualifying {
            let seen = snap.inherited.keys().any(|k| k.to_string() == name);
            assert_eq!(seen, open, "{name} at t={t}");
        }
        assert!(snap.is_present(&path("Tubercule")));
        t += 0.5;
    }
}

/// Every (leaf path, attribute) pair with values below `node`, by brute force.
fn brute_force_leaves<S: Scalar>(inst: &ObjectInstance<S>, at: &NodePath) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (p, node) in inst.root.walk() {
        if !p.0.starts_with(&at.0) || !node.is_leaf() {
            continue;
        }
        let rel = NodePath(p.0[at.0.len()..].to_vec());
        for (name, values) in &node.attributes {
            if !values.is_empty() {
                out.insert(QualifiedName::new(rel.clone(), name.clone()).to_string());
            }
        }
    }
    out
}

fn c3_ascending_inheritance() {
    let mut gen = Gen::new(3);
    let shape = Shape {
        max_depth: 5,
        max_fanout: 4,
        period: None,
        decorate: false,
    };
    for i in 0..200 {
        let mut kb: Kb = KnowledgeBase::new();
        let root = gen.type_tree(&mut kb, &shape);
        let inst = gen.instance(&kb, &root, &format!("tree{i}"));
        assert!(validate_instance(&kb, &inst).unwrap().is_empty());
        for (at, _) in inst.root.walk() {
            let got: BTreeSet<String> = inherited_attributes(&inst, &at)
                .unwrap()
                .keys()
                .map(|k| k.to_string())
                .collect();
            assert_eq!(got, brute_force_leaves(&inst, &at), "tree {i} at {at}");
        }
        // locality: an attribute is seen from its ancestors and nowhere else
        let all = inst.root.walk();
        let views: Vec<BTreeSet<String>> = all
            .iter()
            .map(|(p, _)| {
                inherited_attributes(&inst, p)
                    .unwrap()
                    .keys()
                    .map(|k| {
                        let mut steps = p.0.clone();
                        steps.extend(k.path.0.iter().cloned());
                        QualifiedName::new(NodePath(steps), k.attribute.clone()).to_string()
                    })
                    .collect()
            })
            .collect();
        for (leaf_path, leaf) in all.iter().filter(|(_, n)| n.is_leaf()) {
            for (name, values) in &leaf.attributes {
                let absolute = QualifiedName::new(leaf_path.clone(), name.clone()).to_string();
                for ((other, _), view) in all.iter().zip(&views) {
                    let is_ancestor = leaf_path.0.starts_with(&other.0) && !values.is_empty();
                    assert_eq!(
                        view.contains(&absolute),
                        is_ancestor,
                        "tree {i}: {absolute} from {other}"
                    );
                }
            }
        }
    }
}

fn c4_composition_algebra() {
    let mut gen = Gen::new(4);
    let shape = Shape {
        max_depth: 3,
        max_fanout: 3,
        period: None,
        decorate: false,
    };
    for i in 0..120 {
        let mut kb: Kb = KnowledgeBase::new();
        let a = gen.type_tree(&mut kb, &shape);
        let b = gen.type_tree(&mut kb, &shape);
        let name = format!("C{i}");
        let c = compose_types(&mut kb, &a, &b, &name).unwrap().clone();
        let sa = resolve_effective_schema(&kb, &a).unwrap();
        let sb = resolve_effective_schema(&kb, &b).unwrap();
        let sc = resolve_effective_schema(&kb, &name).unwrap();
        let got: BTreeSet<String> = sc.qualifying_names().into_iter().collect();
        let want: BTreeSet<String> = sa
            .qualifying_names()
            .into_iter()
            .map(|n| format!("{a}.{n}"))
            .chain(
                sb.qualifying_names()
                    .into_iter()
                    .map(|n| format!("{b}.{n}")),
            )
            .collect();
        assert_eq!(got, want);
        assert!(!is_subtype(&kb, &name, &a).unwrap());
        assert!(!is_subtype(&kb, &name, &b).unwrap());
        assert_eq!(c.levels, sa.levels.max(sb.levels) + 1);
    }
}

fn c5_external_inheritance() {
    let mut gen = Gen::new(5);
    for _ in 0..150 {
        let mut kb: Kb = KnowledgeBase::new();
        let mut names: Vec<String> = Vec::new();
        let mut own: Vec<BTreeSet<String>> = Vec::new();
        let mut parents: Vec<Option<usize>> = Vec::new();
        let count = gen.rng.gen_range(1..=10);
        for i in 0..count {
            // a forest where every chain is at most 6 types long
            let depth_of = |mut j: usize, parents: &[Option<usize>]| {
                let mut d = 1;
                while let Some(p) = parents[j] {
                    d += 1;
                    j = p;
                }
                d
            };
            let parent = (i > 0 && gen.rng.gen_bool(0.8))
                .then(|| gen.rng.gen_range(0..i))
                .filter(|&p| depth_of(p, &parents) < 6);
            let mut def = TypeDef::new(format!("E{i}"), 0);
            if let Some(p) = parent {
                def = def.isa(names[p].clone());
            }
            let mut mine = BTreeSet::new();
            for k in 0..gen.rng.gen_range(0..3) {
                let mut attr = AttributeDef::new(
                    format!("q{i}_{k}"),
                    Domain::Enum(vec!["x".into()]),
                    Cardinality::ONE,
                );
                if gen.rng.gen_bool(0.7) {
                    attr = attr.qualifying();
                    mine.insert(attr.name.clone());
                }
                def = def.attr(attr);
            }
            kb.add_type(def).unwrap();
            names.push(format!("E{i}"));
            own.push(mine);
            parents.push(parent);
        }
        for (i, name) in names.iter().enumerate() {
            let mut want = BTreeSet::new();
            let mut j = Some(i);
            while let Some(k) = j {
                want.extend(own[k].iter().cloned());
                j = parents[k];
            }
            let got: BTreeSet<String> = resolve_effective_schema(&kb, name)
                .unwrap()
                .qualifying_names()
                .into_iter()
                .collect();
            assert_eq!(got, want, "{name}");
        }
        for (i, name) in names.iter().enumerate() {
            for _ in 0..gen.rng.gen_range(0..3) {
                let id = gen.fresh("e");
                let inst = gen.instance(&kb, name, &id);
                kb.add_instance(inst).unwrap();
            }
            let _ = i;
        }
        for a in &names {
            for b in &names {
                if is_subtype(&kb, a, b).unwrap() {
                    assert!(class_of(&kb, a)
                        .unwrap()
                        .is_subset(&class_of(&kb, b).unwrap()));
                }
            }
        }
    }
}

fn weighted_example() -> (Kb, ObjectInstance<f64>, ObjectInstance<f64>) {
    let mut kb = Kb::new();
    let leaf = |name: &str| {
        TypeDef::new(name, 0).attr(AttributeDef::new(
            "x",
            Domain::Range {
                lo: 0.0,
                hi: 100.0,
                unit: None,
            },
            Cardinality::ONE,
        ))
    };
    kb.add_type(leaf("L1")).unwrap();
    kb.add_type(leaf("L2")).unwrap();
    kb.add_type(
        TypeDef::new("W", 1)
            .part(PartSlot::new("P", "L1"))
            .part(PartSlot::new("Q", "L2").with_reliability(TimeFunction::Constant(50.0))),
    )
    .unwrap();
    let make = |id: &str, p: f64, q: f64| {
        let mut inst = ObjectInstance::materialize(&kb, id, "W").unwrap();
        apply_user_update(
            &kb,
            &mut inst,
            &"P.x".parse().unwrap(),
            vec![Value::Number(p)],
        )
        .unwrap();
        apply_user_update(
            &kb,
            &mut inst,
            &"Q.x".parse().unwrap(),
            vec![Value::Number(q)],
        )
        .unwrap();
        inst
    };
    // factor 2 at 50: P is 10 off (20%), Q is 30 off (60%)
    let theo = make("w", 50.0, 50.0);
    let obs = make("obs", 60.0, 80.0);
    (kb, theo, obs)
}

fn c6_evaluation_properties() {
    let mut gen = Gen::new(6);
    for _ in 0..2000 {
        let lo: i64 = gen.rng.gen_range(-200..200);
        let hi = lo + gen.rng.gen_range(1..300);
        let theo: Rational64 = gen.quarter(lo, hi);
        let f = scale_factor(&theo, &q(lo), &q(hi)).unwrap();
        let a: Rational64 = gen.quarter(lo, hi);
        let b: Rational64 = gen.quarter(lo, hi);
        let (da, db) = (
            distance(&a, &theo, &f).percent,
            distance(&b, &theo, &f).percent,
        );
        assert!(da >= q(0) && da <= q(100));
        assert_eq!(da == q(0), a == theo);
        let (ga, gb) = (abs(a - theo), abs(b - theo));
        if ga < gb {
            assert!(da < db);
        }
        let far = if abs(q(lo) - theo) >= abs(q(hi) - theo) {
            q(lo)
        } else {
            q(hi)
        };
        assert_eq!(distance(&far, &theo, &f).percent, q(100));
    }

    let (kb, theo, obs) = weighted_example();
    let report = eval_global(&kb, &theo, &obs, &0.0).unwrap();
    assert!((report.score - 33.33).abs() <= 0.01, "{}", report.score);
    assert_eq!(report.score.to_fixed(2), "33.33");

    for round in 0..50 {
        let mut kb: Kb = KnowledgeBase::new();
        let root = gen.type_tree(
            &mut kb,
            &Shape {
                max_depth: 2,
                max_fanout: 3,
                period: None,
                decorate: false,
            },
        );
        let n = gen.rng.gen_range(1..6);
        let twin = gen.instance(&kb, &root, "z_twin");
        for i in 0..n {
            let inst = if i % 2 == 0 {
                ObjectInstance {
                    id: format!("c{round}_{i}"),
                    ..twin.clone()
                }
            } else {
                gen.instance(&kb, &root, &format!("c{round}_{i}"))
            };
            kb.add_instance(inst).unwrap();
        }
        let observed = gen.instance(&kb, &root, "seen");
        let members = class_of(&kb, &root).unwrap();
        match rank_candidates(&kb, &root, &observed, &0.0) {
            Ok(reports) => {
                let ids: BTreeSet<String> = reports.iter().map(|r| r.candidate.clone()).collect();
                assert_eq!(ids, members);
                for (i, pair) in reports.windows(2).enumerate() {
                    let (x, y) = (&pair[0], &pair[1]);
                    assert!(x.score < y.score || (x.score == y.score && x.candidate < y.candidate));
                    assert_eq!(x.rank, i + 1);
                }
                for r in &reports {
                    assert!(r.score >= 0.0 && r.score <= 100.0);
                }
            }
            Err(ckb_core::Error::EmptyOverlap) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

fn same_state<S: Scalar>(a: &Snapshot<S>, b: &Snapshot<S>) -> bool {
    a.nodes == b.nodes && a.inherited == b.inherited && a.references == b.references
}

fn c7_temporal_purity() {
    let mut gen = Gen::new(7);
    let kb: ExactKb = parse_kb(samples::COLCHIQUE).unwrap();
    let plant = kb.instance("colchique1").unwrap();
    for _ in 0..50 {
        let t = Rational64::new(
            gen.rng.gen_range(-100_000..100_000),
            gen.rng.gen_range(1..97),
        );
        let a = snapshot(&kb, plant, &t).unwrap();
        assert_eq!(a, snapshot(&kb, plant, &t).unwrap());
        assert!(same_state(
            &a,
            &snapshot(&kb, plant, &(t + q(365))).unwrap()
        ));
    }
    for round in 0..20 {
        let period = gen.rng.gen_range(1..500);
        let mut kb: ExactKb = KnowledgeBase::new();
        let root = gen.type_tree(
            &mut kb,
            &Shape {
                max_depth: 3,
                max_fanout: 3,
                period: Some(period),
                decorate: false,
            },
        );
        // references vary over time as well; make them periodic too
        for def in kb.types.values_mut() {
            for attr in &mut def.attributes {
                if let Some(ckb_core::Reference::Function(_)) = attr.reference {
                    attr.reference = Some(ckb_core::Reference::Function(gen.time_fn(Some(period))));
                }
            }
        }
        let inst = gen.instance(&kb, &root, &format!("p{round}"));
        for _ in 0..50 {
            let t = Rational64::new(gen.rng.gen_range(-50_000..50_000), gen.rng.gen_range(1..31));
            let k = q(gen.rng.gen_range(-3..4));
            let a = snapshot(&kb, &inst, &t).unwrap();
            assert_eq!(a, snapshot(&kb, &inst, &t).unwrap());
            assert!(same_state(
                &a,
                &snapshot(&kb, &inst, &(t + q(period) * k)).unwrap()
            ));
        }
    }
}

const SYNTAX_ERRORS: [&str; 14] = [
    "type",
    "type X",
    "type X {",
    "type X { levels }",
    "type X { levels 1 attr }",
    "type X { levels 0 attr a domain set(x) card 1..1 }",
    "type X { levels 0 attr a domain enum(x) card 1.. }",
    "type X { levels 0 part P : Y card 1..* reliability constant(100) }",
    "type X { levels 0 }\n\ninstance i of X { a = }",
    "instance i of X { a.b[x] = 1 }",
    "type X { levels 0 attr a domain range(0, 1) card 1..1 ref sine(3) }",
    "type X { levels 0 }\n  \"unterminated",
    "type X { levels 0 } @",
    "timeunit day",
];

fn c8_dsl_round_trip() {
    for (name, text) in samples::ALL {
        let kb: Kb = parse_kb(text).unwrap();
        let out = serialize_kb(&kb);
        assert_eq!(parse_kb::<f64>(&out).unwrap(), kb, "{name}");
        assert_eq!(serialize_kb(&parse_kb::<f64>(&out).unwrap()), out, "{name}");
        let exact: ExactKb = parse_kb(text).unwrap();
        assert_eq!(
            parse_kb::<Rational64>(&serialize_kb(&exact)).unwrap(),
            exact,
            "{name}"
        );
    }
    let mut gen = Gen::new(8);
    let shape = Shape {
        max_depth: 3,
        max_fanout: 3,
        period: None,
        decorate: true,
    };
    for i in 0..120 {
        let kb: Kb = gen.knowledge_base(&shape);
        let out = serialize_kb(&kb);
        let back = parse_kb::<f64>(&out).unwrap_or_else(|d| panic!("kb {i}: {d:?}\n{out}"));
        assert_eq!(back, kb, "kb {i}\n{out}");
        assert_eq!(serialize_kb(&back), out, "kb {i}");
    }
    for i in 0..30 {
        let kb: ExactKb = gen.knowledge_base(&shape);
        let out = serialize_kb(&kb);
        assert_eq!(parse_kb::<Rational64>(&out).unwrap(), kb, "exact kb {i}");
    }
    for text in SYNTAX_ERRORS {
        let diags = parse_kb::<f64>(text).unwrap_err();
        assert!(!diags.is_empty(), "{text:?}");
        let lines: Vec<&str> = text.split('\n').collect();
        for d in &diags {
            let s = &d.span;
            assert!(s.line >= 1 && s.line <= lines.len(), "{text:?}: {d}");
            let width = lines[s.line - 1].chars().count();
            assert!(
                s.column >= 1 && s.column + s.length <= width + 2,
                "{text:?}: {d}"
            );
        }
    }
}

fn c9_update_legality() {
    let mut gen = Gen::new(9);
    let shape = Shape {
        max_depth: 3,
        max_fanout: 3,
        period: None,
        decorate: false,
    };
    let (mut accepted, mut rejected) = (0, 0);
    for round in 0..100 {
        let mut kb: Kb = KnowledgeBase::new();
        let root = gen.type_tree(&mut kb, &shape);
        let mut inst = gen.instance(&kb, &root, &format!("u{round}"));
        let leaves: Vec<NodePath> = inst
            .root
            .walk()
            .into_iter()
            .filter(|(_, n)| n.is_leaf())
            .map(|(p, _)| p)
            .filter(|p| !node_schema(&kb, &inst, p).unwrap().attributes.is_empty())
            .collect();
        if leaves.is_empty() {
            continue;
        }
        for _ in 0..40 {
            let at = leaves[gen.rng.gen_range(0..leaves.len())].clone();
            let schema = node_schema(&kb, &inst, &at).unwrap();
            let attr = &schema.attributes[gen.rng.gen_range(0..schema.attributes.len())];
            let name = if gen.rng.gen_bool(0.1) {
                "inconnu".to_string()
            } else {
                attr.name.clone()
            };
            let n = gen.rng.gen_range(0..4);
            let values: Vec<Value<f64>> = (0..n)
                .map(|_| {
                    if gen.rng.gen_bool(0.5) {
                        gen.value_in(&attr.domain)
                    } else {
                        gen.wild_value()
                    }
                })
                .collect();
            let before = inst.clone();
            match apply_user_update(&kb, &mut inst, &QualifiedName::new(at, name), values) {
                Ok(()) => {
                    accepted += 1;
                    assert!(validate_instance(&kb, &inst).unwrap().is_empty());
                }
                Err(_) => {
                    rejected += 1;
                    assert_eq!(inst, before);
                }
            }
        }
    }
    assert!(
        accepted > 100 && rejected > 100,
        "{accepted} accepted, {rejected} rejected"
    );
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/samples")
}

fn ckb(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ckb"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn c10_cli_delegation() {
    let dir = fixtures_dir();
    let file = |name: &str| dir.join(name).display().to_string();
    let load =
        |name: &str| -> Kb { parse_kb(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap() };
    let colchique = load("colchique.ckb");
    let porte = load("porte.ckb");
    let maladies = load("maladies.ckb");
    let plant = colchique.instance("colchique1").unwrap();
    let patient = dsl::parse_observation(&maladies, samples::PATIENT)
        .unwrap()
        .instance;
    let reports = rank_candidates(&maladies, "Maladie", &patient, &0.0).unwrap();
    let door = porte.instance("portiere1").unwrap();
    let mut sendable = porte.clone();
    let reply = send(
        &mut sendable,
        &Message::new("état?", Target::Instance("portiere1".into())),
    )
    .unwrap();

    let cases: Vec<(Vec<String>, String)> = vec![
        (
            vec!["validate".into(), file("colchique.ckb")],
            String::new(),
        ),
        (
            vec![
                "show".into(),
                file("porte.ckb"),
                "portiere1".into(),
                "--attrs".into(),
            ],
            render::attributes_text(door),
        ),
        (
            vec![
                "show".into(),
                file("porte.ckb"),
                "portiere1".into(),
                "--attrs".into(),
                "--zoom".into(),
                "Serrure".into(),
            ],
            render::attributes_text(&zoom(door, &path("Serrure")).unwrap()),
        ),
        (
            vec![
                "show".into(),
                file("colchique.ckb"),
                "colchique1".into(),
                "--tree".into(),
                "--at".into(),
                "15".into(),
            ],
            render::tree_text(&colchique, plant, &15.0).unwrap(),
        ),
        (
            vec![
                "show".into(),
                file("colchique.ckb"),
                "colchique1".into(),
                "--attrs".into(),
                "--at".into(),
                "270".into(),
            ],
            render::attributes_at_text(&colchique, plant, &270.0).unwrap(),
        ),
        (
            vec![
                "match".into(),
                file("maladies.ckb"),
                "--observe".into(),
                file("patient.ckb"),
                "--type".into(),
                "Maladie".into(),
            ],
            render::match_report_text(&reports),
        ),
        (
            vec![
                "match".into(),
                file("maladies.ckb"),
                "--observe".into(),
                file("patient.ckb"),
                "--type".into(),
                "Maladie".into(),
                "--json".into(),
            ],
            render::json_text(&render::match_report_json(
                "patient1", "Maladie", &0.0, &reports,
            )),
        ),
        (
            vec![
                "timeline".into(),
                file("colchique.ckb"),
                "colchique1".into(),
                "--from".into(),
                "0".into(),
                "--to".into(),
                "365".into(),
                "--step".into(),
                "5".into(),
            ],
            timeline_csv(&colchique, plant, &0.0, &365.0, &5.0).unwrap(),
        ),
        (
            vec![
                "send".into(),
                file("porte.ckb"),
                "--to".into(),
                "portiere1".into(),
                "--msg".into(),
                "état?".into(),
            ],
            reply.to_string(),
        ),
    ];
    for (args, expected) in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = ckb(&args);
        let second = ckb(&args);
        assert_eq!(first.0, 0, "{args:?}");
        assert_eq!(&first.1, expected, "{args:?}");
        assert_eq!(first, second, "{args:?}");
    }

    let out = std::env::temp_dir().join(format!("ckb-acceptance-{}.ckb", std::process::id()));
    let out_s = out.display().to_string();
    let compose_args = [
        "compose",
        &file("stylo.ckb"),
        "--type-a",
        "Stylo",
        "--type-b",
        "Gomme",
        "--as",
        "STYLO_GOMME",
        "--inst-a",
        "stylo1",
        "--inst-b",
        "gomme1",
        "--id",
        "crayon1",
        "--out",
        &out_s,
    ];
    assert_eq!(ckb(&compose_args).0, 0);
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(ckb(&compose_args).0, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let mut expected = load("stylo.ckb");
    compose_types(&mut expected, "Stylo", "Gomme", "STYLO_GOMME").unwrap();
    let composed = ckb_core::compose_instances(
        &expected,
        expected.instance("stylo1").unwrap(),
        expected.instance("gomme1").unwrap(),
        "STYLO_GOMME",
        "crayon1",
    )
    .unwrap();
    expected.add_instance(composed).unwrap();
    assert_eq!(first, serialize_kb(&expected));
    assert_eq!(ckb(&["validate", &out_s]), (0, String::new()));
    std::fs::remove_file(&out).ok();
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn(), u64); 10] = [
        ("1 fever formula reproduction", c1_fever_formula, 1),
        ("2 colchique seasonal scenario", c2_colchique_seasons, 1),
        (
            "3 ascending inheritance on random trees",
            c3_ascending_inheritance,
            30,
        ),
        ("4 composition algebra", c4_composition_algebra, 10),
        ("5 external inheritance", c5_external_inheritance, 10),
        ("6 evaluation properties", c6_evaluation_properties, 10),
        ("7 temporal purity and periodicity", c7_temporal_purity, 10),
        ("8 dsl round-trip", c8_dsl_round_trip, 30),
        ("9 update legality", c9_update_legality, 30),
        ("10 cli delegation", c10_cli_delegation, 10),
    ];
    let mut failures = Vec::new();
    let mut out = std::io::stdout().lock();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let within = elapsed < Duration::from_secs(budget);
        let verdict = match (&result, within) {
            (Ok(()), true) => "PASS",
            _ => "FAIL",
        };
        writeln!(
            out,
            "criterion {name}: {verdict} ({:.3} s, limit {budget} s)",
            elapsed.as_secs_f64()
        )
        .unwrap();
        if verdict == "FAIL" {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
