//! Recursive descent over the token stream, one token of lookahead (two for
//! the `part = ...` binding corner). Stops at the first syntax error.

use super::lexer::{tokenize, Token, TokenKind};
use super::{Diagnostic, SourceSpan};
use crate::dynamics::TimeFunction;
use crate::evaluation::{Aggregation, EvalTable, GlobalEvalSpec, MissingPolicy};
use crate::messaging::{Action, Handler};
use crate::scalar::Scalar;
use crate::types::{AttributeDef, Cardinality, Domain, PartSlot, Reference, TypeDef, Value};

type PResult<T> = Result<T, Diagnostic>;

/// Attribute- and function-local checks that lowering runs with a span.
#[derive(Debug, Clone)]
pub enum LocalCheck<S> {
    Attribute(AttributeDef<S>),
    Function(TimeFunction<S>),
    Global(GlobalEvalSpec<S>),
}

#[derive(Debug, Clone)]
pub struct TypeDecl<S> {
    pub def: TypeDef<S>,
    pub name_span: SourceSpan,
    /// Every type name the declaration mentions (supertype, part types).
    pub type_refs: Vec<(String, SourceSpan)>,
    /// Attribute and slot names, for pointing at overrides.
    pub members: Vec<(String, SourceSpan)>,
    pub checks: Vec<(SourceSpan, LocalCheck<S>)>,
    pub tables: Vec<(String, SourceSpan)>,
}

#[derive(Debug, Clone)]
pub struct Binding<S> {
    /// Qualified attribute name, or a node path when `part_only`.
    pub target: String,
    pub span: SourceSpan,
    pub values: Vec<(Value<S>, SourceSpan)>,
    pub part_only: bool,
}

#[derive(Debug, Clone)]
pub struct InstanceDecl<S> {
    pub id: String,
    pub id_span: SourceSpan,
    pub type_name: String,
    pub type_span: SourceSpan,
    pub bindings: Vec<Binding<S>>,
}

#[derive(Debug, Clone)]
pub struct Document<S> {
    pub time_unit: Option<(String, SourceSpan)>,
    pub types: Vec<TypeDecl<S>>,
    pub instances: Vec<InstanceDecl<S>>,
}

pub fn parse_document<S: Scalar>(file: &str, text: &str) -> PResult<Document<S>> {
    let tokens = tokenize(file, text)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut doc = Document {
        time_unit: None,
        types: Vec::new(),
        instances: Vec::new(),
    };
    loop {
        let tok = p.peek().clone();
        match &tok.kind {
            TokenKind::Eof => break,
            TokenKind::Ident(kw) if kw == "type" => doc.types.push(p.typedef()?),
            TokenKind::Ident(kw) if kw == "instance" => doc.instances.push(p.instancedef()?),
            TokenKind::Ident(kw) if kw == "timeunit" => {
                p.bump();
                if doc.time_unit.is_some() {
                    return Err(Diagnostic::error("time unit declared twice", tok.span));
                }
                let (unit, span) = p.string()?;
                doc.time_unit = Some((unit, span));
            }
            other => {
                return Err(Diagnostic::error(
                    format!(
                        "expected `type`, `instance` or `timeunit`, found {}",
                        other.describe()
                    ),
                    tok.span,
                ))
            }
        }
    }
    Ok(doc)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn join(a: &SourceSpan, b: &SourceSpan) -> SourceSpan {
    let length = if a.line == b.line {
        b.column + b.length - a.column
    } else {
        a.length
    };
    SourceSpan {
        length,
        ..a.clone()
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &TokenKind {
        &self.tokens[(self.pos + ahead).min(self.tokens.len() - 1)].kind
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        let tok = self.peek();
        Err(Diagnostic::error(
            format!("expected {wanted}, found {}", tok.kind.describe()),
            tok.span.clone(),
        ))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn punct(&mut self, kind: TokenKind) -> PResult<SourceSpan> {
        if self.peek().kind == kind {
            Ok(self.bump().span)
        } else {
            self.unexpected(&kind.describe())
        }
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn string(&mut self) -> PResult<(String, SourceSpan)> {
        match &self.peek().kind {
            TokenKind::Str(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            _ => self.unexpected("a string"),
        }
    }

    fn int(&mut self) -> PResult<u32> {
        match &self.peek().kind {
            TokenKind::Number(n) => {
                let parsed = n.parse::<u32>().ok();
                let tok = self.bump();
                parsed.ok_or_else(|| Diagnostic::error("expected a non-negative integer", tok.span))
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn num<S: Scalar>(&mut self) -> PResult<(S, SourceSpan)> {
        match &self.peek().kind {
            TokenKind::Number(n) => {
                let parsed = S::parse_decimal(n);
                let tok = self.bump();
                parsed
                    .map(|v| (v, tok.span.clone()))
                    .ok_or_else(|| Diagnostic::error("number is not representable", tok.span))
            }
            _ => self.unexpected("a number"),
        }
    }

    fn value<S: Scalar>(&mut self) -> PResult<(Value<S>, SourceSpan)> {
        match &self.peek().kind {
            TokenKind::Ident(_) => self.ident().map(|(s, span)| (Value::Symbol(s), span)),
            TokenKind::Number(_) => self.num().map(|(n, span)| (Value::Number(n), span)),
            _ => self.unexpected("a value"),
        }
    }

    /// `Seg[i].Seg.name`, returned as text with the span it covers.
    fn qualname(&mut self) -> PResult<(String, SourceSpan)> {
        let (first, start) = self.ident()?;
        let mut text = first;
        let mut end = start.clone();
        loop {
            if self.peek().kind == TokenKind::LBracket {
                self.bump();
                let i = self.int()?;
                end = self.punct(TokenKind::RBracket)?;
                text.push_str(&format!("[{i}]"));
            }
            if self.peek().kind != TokenKind::Dot {
                break;
            }
            self.bump();
            let (seg, span) = self.ident()?;
            text.push('.');
            text.push_str(&seg);
            end = span;
        }
        Ok((text, join(&start, &end)))
    }

    fn typedef<S: Scalar>(&mut self) -> PResult<TypeDecl<S>> {
        self.keyword("type")?;
        let (name, name_span) = self.ident()?;
        let mut decl = TypeDecl {
            def: TypeDef::new(name, 0),
            name_span,
            type_refs: Vec::new(),
            members: Vec::new(),
            checks: Vec::new(),
            tables: Vec::new(),
        };
        if self.eat_keyword("isa") {
            let (sup, span) = self.ident()?;
            decl.type_refs.push((sup.clone(), span));
            decl.def.supertype = Some(sup);
        }
        self.punct(TokenKind::LBrace)?;
        self.keyword("levels")?;
        decl.def.levels = self.int()?;
        loop {
            let tok = self.peek().clone();
            match &tok.kind {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Ident(kw) if kw == "attr" => {
                    let attr = self.attrdef(&mut decl)?;
                    decl.def.attributes.push(attr);
                }
                TokenKind::Ident(kw) if kw == "part" => {
                    let part = self.partdef(&mut decl)?;
                    decl.def.parts.push(part);
                }
                TokenKind::Ident(kw) if kw == "eval" => self.evaldef(&mut decl)?,
                TokenKind::Ident(kw) if kw == "on" => {
                    let handler = self.handlerdef()?;
                    decl.def.handlers.push(handler);
                }
                TokenKind::Ident(kw) if kw == "explain" => {
                    self.bump();
                    if decl.def.explanation.is_some() {
                        return Err(Diagnostic::error("explanation given twice", tok.span));
                    }
                    decl.def.explanation = Some(self.string()?.0);
                }
                _ => return self.unexpected("`attr`, `part`, `eval`, `on`, `explain` or `}`"),
            }
        }
        Ok(decl)
    }

    fn attrdef<S: Scalar>(&mut self, decl: &mut TypeDecl<S>) -> PResult<AttributeDef<S>> {
        let start = self.keyword("attr")?;
        let (name, name_span) = self.ident()?;
        let qualifying = self.eat_keyword("qualifying");
        self.keyword("domain")?;
        let domain = self.domain()?;
        self.keyword("card")?;
        let min = self.int()?;
        self.punct(TokenKind::DotDot)?;
        let max = if self.eat(TokenKind::Star) {
            None
        } else {
            Some(self.int()?)
        };
        let mut attr = AttributeDef::new(name.clone(), domain, Cardinality::new(min, max));
        attr.qualifying = qualifying;
        if self.eat_keyword("ref") {
            attr.reference = Some(match self.peek().kind {
                TokenKind::Number(_) => Reference::Constant(self.num()?.0),
                _ => Reference::Function(self.timefn()?.0),
            });
        }
        decl.members.push((name, name_span.clone()));
        let end = self.tokens[self.pos - 1].span.clone();
        decl.checks
            .push((join(&start, &end), LocalCheck::Attribute(attr.clone())));
        Ok(attr)
    }

    fn domain<S: Scalar>(&mut self) -> PResult<Domain<S>> {
        if self.eat_keyword("enum") {
            self.punct(TokenKind::LParen)?;
            let mut values = vec![self.ident()?.0];
            while self.eat(TokenKind::Comma) {
                values.push(self.ident()?.0);
            }
            self.punct(TokenKind::RParen)?;
            Ok(Domain::Enum(values))
        } else if self.eat_keyword("range") {
            self.punct(TokenKind::LParen)?;
            let lo = self.num()?.0;
            self.punct(TokenKind::Comma)?;
            let hi = self.num()?.0;
            self.punct(TokenKind::RParen)?;
            let unit = if self.eat_keyword("unit") {
                Some(self.string()?.0)
            } else {
                None
            };
            Ok(Domain::Range { lo, hi, unit })
        } else {
            self.unexpected("`enum` or `range`")
        }
    }

    fn partdef<S: Scalar>(&mut self, decl: &mut TypeDecl<S>) -> PResult<PartSlot<S>> {
        self.keyword("part")?;
        let (name, name_span) = self.ident()?;
        self.punct(TokenKind::Colon)?;
        let (part_type, type_span) = self.ident()?;
        decl.type_refs.push((part_type.clone(), type_span));
        decl.members.push((name.clone(), name_span));
        self.keyword("card")?;
        let min = self.int()?;
        self.punct(TokenKind::DotDot)?;
        let max = self.int()?;
        self.keyword("reliability")?;
        let (reliability, fn_span) = self.timefn()?;
        decl.checks
            .push((fn_span, LocalCheck::Function(reliability.clone())));
        let mut slot = PartSlot::new(name, part_type)
            .with_cardinality(Cardinality::new(min, Some(max)))
            .with_reliability(reliability);
        if self.eat(TokenKind::LBrace) {
            loop {
                let tok = self.peek().clone();
                match &tok.kind {
                    TokenKind::RBrace => {
                        self.bump();
                        break;
                    }
                    TokenKind::Ident(kw) if kw == "attr" => {
                        let attr = self.attrdef(decl)?;
                        slot.attributes.push(attr);
                    }
                    TokenKind::Ident(kw) if kw == "part" => {
                        let part = self.partdef(decl)?;
                        slot.parts.push(part);
                    }
                    TokenKind::Ident(kw) if kw == "explain" => {
                        self.bump();
                        if slot.explanation.is_some() {
                            return Err(Diagnostic::error("explanation given twice", tok.span));
                        }
                        slot.explanation = Some(self.string()?.0);
                    }
                    _ => return self.unexpected("`attr`, `part`, `explain` or `}`"),
                }
            }
        }
        Ok(slot)
    }

    fn timefn<S: Scalar>(&mut self) -> PResult<(TimeFunction<S>, SourceSpan)> {
        let (kind, start) = self.ident()?;
        let f = match kind.as_str() {
            "constant" => {
                self.punct(TokenKind::LParen)?;
                let c = self.num()?.0;
                self.punct(TokenKind::RParen)?;
                TimeFunction::Constant(c)
            }
            "linear" => {
                self.punct(TokenKind::LParen)?;
                let slope = self.num()?.0;
                self.punct(TokenKind::Comma)?;
                let intercept = self.num()?.0;
                self.punct(TokenKind::RParen)?;
                TimeFunction::Linear { slope, intercept }
            }
            "piecewise" => {
                let interpolate = self.eat_keyword("linear");
                self.punct(TokenKind::LParen)?;
                let mut points = vec![self.point()?];
                while self.eat(TokenKind::Comma) {
                    points.push(self.point()?);
                }
                self.punct(TokenKind::RParen)?;
                TimeFunction::Piecewise {
                    points,
                    interpolate,
                }
            }
            "periodic" => {
                self.punct(TokenKind::LParen)?;
                let period = self.num()?.0;
                self.punct(TokenKind::Comma)?;
                let inner = self.timefn()?.0;
                self.punct(TokenKind::RParen)?;
                TimeFunction::Periodic {
                    period,
                    inner: Box::new(inner),
                }
            }
            _ => {
                return Err(
                    Diagnostic::error(format!("unknown time function `{kind}`"), start)
                        .with_hint("use constant, linear, piecewise or periodic"),
                )
            }
        };
        let end = self.tokens[self.pos - 1].span.clone();
        Ok((f, join(&start, &end)))
    }

    fn point<S: Scalar>(&mut self) -> PResult<(S, S)> {
        self.punct(TokenKind::LParen)?;
        let a = self.num()?.0;
        self.punct(TokenKind::Comma)?;
        let b = self.num()?.0;
        self.punct(TokenKind::RParen)?;
        Ok((a, b))
    }

    fn evaldef<S: Scalar>(&mut self, decl: &mut TypeDecl<S>) -> PResult<()> {
        let start = self.keyword("eval")?;
        if self.eat_keyword("global") {
            let aggregation = match self.ident()? {
                (kw, _) if kw == "mean" => Aggregation::WeightedMean,
                (kw, _) if kw == "max" => Aggregation::Max,
                (kw, _) if kw == "min" => Aggregation::Min,
                (kw, _) if kw == "rules" => {
                    self.punct(TokenKind::LParen)?;
                    let mut bands = vec![self.point()?];
                    while self.eat(TokenKind::Comma) {
                        bands.push(self.point()?);
                    }
                    self.punct(TokenKind::RParen)?;
                    Aggregation::Rules(bands)
                }
                (other, span) => {
                    return Err(
                        Diagnostic::error(format!("unknown aggregation `{other}`"), span)
                            .with_hint("use mean, max, min or rules(...)"),
                    )
                }
            };
            let missing = if self.eat_keyword("missing") {
                match self.ident()? {
                    (kw, _) if kw == "ignore" => MissingPolicy::Ignore,
                    (kw, _) if kw == "penalize" => {
                        self.punct(TokenKind::LParen)?;
                        let p = self.num()?.0;
                        self.punct(TokenKind::RParen)?;
                        MissingPolicy::Penalize(p)
                    }
                    (other, span) => {
                        return Err(Diagnostic::error(
                            format!("unknown missing-value policy `{other}`"),
                            span,
                        )
                        .with_hint("use ignore or penalize(N)"))
                    }
                }
            } else {
                MissingPolicy::Ignore
            };
            let end = self.tokens[self.pos - 1].span.clone();
            if decl.def.global_eval.is_some() {
                return Err(Diagnostic::error("global evaluation declared twice", start));
            }
            let spec = GlobalEvalSpec {
                aggregation,
                missing,
            };
            decl.checks
                .push((join(&start, &end), LocalCheck::Global(spec.clone())));
            decl.def.global_eval = Some(spec);
            return Ok(());
        }
        let (attribute, attr_span) = self.ident()?;
        self.keyword("table")?;
        self.punct(TokenKind::LParen)?;
        let mut entries = Vec::new();
        // an enum with a single value has no pairs, hence `table()`
        while self.peek().kind != TokenKind::RParen {
            self.punct(TokenKind::LParen)?;
            let a = self.ident()?.0;
            self.punct(TokenKind::Comma)?;
            let b = self.ident()?.0;
            self.punct(TokenKind::Comma)?;
            let d = self.num()?.0;
            self.punct(TokenKind::RParen)?;
            entries.push((a, b, d));
            if !self.eat(TokenKind::Comma) {
                break;
            }
        }
        self.punct(TokenKind::RParen)?;
        if decl
            .def
            .eval_tables
            .iter()
            .any(|t| t.attribute == attribute)
        {
            return Err(Diagnostic::error(
                format!("second table for `{attribute}`"),
                attr_span,
            ));
        }
        decl.tables.push((attribute.clone(), attr_span));
        decl.def.eval_tables.push(EvalTable { attribute, entries });
        Ok(())
    }

    fn handlerdef<S: Scalar>(&mut self) -> PResult<Handler<S>> {
        self.keyword("on")?;
        let message = match &self.peek().kind {
            TokenKind::Str(_) => self.string()?,
            _ => self.ident()?,
        };
        if message.0.is_empty() {
            return Err(Diagnostic::error("message name is empty", message.1));
        }
        self.punct(TokenKind::Arrow)?;
        let (action_name, action_span) = self.ident()?;
        let mut names = Vec::new();
        let mut rows = Vec::new();
        if self.eat(TokenKind::LParen) {
            loop {
                if self.peek().kind == TokenKind::LParen {
                    self.bump();
                    let k = self.value()?.0;
                    self.punct(TokenKind::Comma)?;
                    let v = self.value()?.0;
                    self.punct(TokenKind::RParen)?;
                    rows.push((k, v));
                } else if rows.is_empty() {
                    names.push(self.qualname()?.0);
                } else {
                    return self.unexpected("a `(key, value)` row");
                }
                if !self.eat(TokenKind::Comma) {
                    break;
                }
            }
            self.punct(TokenKind::RParen)?;
        }
        let arity = |max: usize| {
            if names.len() > max || !rows.is_empty() {
                Err(Diagnostic::error(
                    format!("`{action_name}` takes at most {max} name argument(s)"),
                    action_span.clone(),
                ))
            } else {
                Ok(names.first().cloned())
            }
        };
        let action = match action_name.as_str() {
            "lookup" => Action::Lookup(arity(1)?),
            "attrs" => arity(0).map(|_| Action::Attributes)?,
            "snapshot" => arity(0).map(|_| Action::Snapshot)?,
            "reliability" => Action::Reliability(arity(1)?),
            "reference" => Action::Reference(arity(1)?),
            "eval" => arity(0).map(|_| Action::Evaluate)?,
            "update" => Action::Update(arity(1)?),
            "table" => {
                if names.len() != 1 || rows.is_empty() {
                    return Err(Diagnostic::error(
                        "`table` takes an attribute name followed by `(key, value)` rows",
                        action_span,
                    ));
                }
                Action::Table {
                    attribute: names.remove(0),
                    rows,
                }
            }
            _ => {
                return Err(Diagnostic::error(
                    format!("unknown handler function `{action_name}`"),
                    action_span,
                )
                .with_hint(format!("available: {}", Action::<S>::catalog().join(", "))))
            }
        };
        Ok(Handler {
            message: message.0,
            action,
        })
    }

    fn instancedef<S: Scalar>(&mut self) -> PResult<InstanceDecl<S>> {
        self.keyword("instance")?;
        let (id, id_span) = self.ident()?;
        self.keyword("of")?;
        let (type_name, type_span) = self.ident()?;
        self.punct(TokenKind::LBrace)?;
        let mut bindings = Vec::new();
        while !self.eat(TokenKind::RBrace) {
            let part_only = self.at_keyword("part")
                && !matches!(
                    self.peek_at(1),
                    TokenKind::Eq | TokenKind::Dot | TokenKind::LBracket
                );
            if part_only {
                self.bump();
                let (target, span) = self.qualname()?;
                bindings.push(Binding {
                    target,
                    span,
                    values: Vec::new(),
                    part_only,
                });
                continue;
            }
            if !matches!(self.peek().kind, TokenKind::Ident(_)) {
                return self.unexpected("an attribute name or `}`");
            }
            let (target, span) = self.qualname()?;
            self.punct(TokenKind::Eq)?;
            let mut values = vec![self.value()?];
            while self.eat(TokenKind::Comma) {
                values.push(self.value()?);
            }
            bindings.push(Binding {
                target,
                span,
                values,
                part_only,
            });
        }
        Ok(InstanceDecl {
            id,
            id_span,
            type_name,
            type_span,
            bindings,
        })
    }
}
