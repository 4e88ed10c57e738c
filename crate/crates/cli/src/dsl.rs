//! Textual literals for the mathematical objects the CLI handles, with
//! position-annotated syntax errors. Every printer/parser pair is the
//! identity on canonical spellings.

use num_bigint::BigInt;

use spine_core::coset::{CosetRingExpr, FiniteIndexSubgroup};
use spine_core::rat::{parse_rat, Rat};
use spine_core::spine::{Representative, SpineElement};
use spine_core::subspace::RationalSubspace;
use spine_core::topology::{
    AxbLevel, ChainLevel, Model, QGen, QGrade, TopologyGrade, TwoPointFamily, VectorGroup,
};

/// A syntax error with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "syntax error at {}:{}: {}", self.line, self.col, self.msg)
    }
}

pub type ParseResult<T> = Result<T, SyntaxError>;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn error(&self, msg: impl Into<String>) -> SyntaxError {
        let mut line = 1;
        let mut col = 1;
        for &c in self.chars.iter().take(self.pos) {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> ParseResult<()> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected {c:?}, found {got:?}"))),
            None => Err(self.error(format!("expected {c:?}, found end of input"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let remaining: String = self.chars[self.pos..].iter().collect();
        if remaining.starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    /// A word of identifier characters: letters, digits, `^`, `+`, `-`, `/`.
    fn word(&mut self) -> ParseResult<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || "^+-/_".contains(c)) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a token"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn rational(&mut self) -> ParseResult<Rat> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || "+-/".contains(c)) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rat(&text).map_err(|_| {
            self.pos = start;
            self.error(if text.is_empty() {
                "expected a rational".to_string()
            } else {
                format!("bad rational {text:?}")
            })
        })
    }

    fn integer(&mut self) -> ParseResult<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn finish(&mut self) -> ParseResult<()> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.error(format!(
                "trailing input {:?}",
                &self.src[self.src.len().min(self.byte_pos())..]
            )));
        }
        Ok(())
    }

    fn byte_pos(&self) -> usize {
        self.chars[..self.pos].iter().map(|c| c.len_utf8()).sum()
    }
}

/// Parses a model spelling such as `R^3`, `Q` or `axb`.
pub fn parse_model(text: &str) -> ParseResult<Model> {
    text.trim().parse().map_err(|e| SyntaxError {
        line: 1,
        col: 1,
        msg: format!("{e}"),
    })
}

fn rational_vector(cur: &mut Cursor) -> ParseResult<Vec<Rat>> {
    cur.expect('[')?;
    let mut out = Vec::new();
    if !cur.eat(']') {
        loop {
            out.push(cur.rational()?);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    Ok(out)
}

fn integer_vector(cur: &mut Cursor) -> ParseResult<Vec<BigInt>> {
    cur.expect('[')?;
    let mut out = Vec::new();
    if !cur.eat(']') {
        loop {
            out.push(cur.integer()?);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    Ok(out)
}

fn span_body(cur: &mut Cursor, ambient: usize) -> ParseResult<RationalSubspace> {
    if !cur.eat_str("span") {
        return Err(cur.error("expected \"span\""));
    }
    cur.expect('[')?;
    let mut rows = Vec::new();
    if !cur.eat(']') {
        loop {
            rows.push(rational_vector(cur)?);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    let err_pos = cur.error("");
    RationalSubspace::from_rows(ambient, rows).map_err(|e| SyntaxError {
        msg: format!("{e}"),
        ..err_pos
    })
}

/// Parses `span[[1,0],[0,1]]` against a given ambient dimension.
pub fn parse_subspace(text: &str, ambient: usize) -> ParseResult<RationalSubspace> {
    let mut cur = Cursor::new(text);
    let s = span_body(&mut cur, ambient)?;
    cur.finish()?;
    Ok(s)
}

/// Parses a grade literal appropriate to the model: a span literal for the
/// vector models, a chain level name for the finite models, a generator set
/// or `TOP` for the rationals.
pub fn parse_grade(model: &Model, text: &str) -> ParseResult<TopologyGrade> {
    let mut cur = Cursor::new(text);
    let g = grade_body(&mut cur, model)?;
    cur.finish()?;
    Ok(g)
}

fn grade_body(cur: &mut Cursor, model: &Model) -> ParseResult<TopologyGrade> {
    match model {
        Model::Vector { group, dim } => {
            let space = span_body(cur, *dim)?;
            Ok(TopologyGrade::Vector {
                group: *group,
                space,
            })
        }
        Model::Compact => {
            if cur.eat_str("full") {
                Ok(TopologyGrade::Compact)
            } else {
                Err(cur.error("the compact model has the single grade \"full\""))
            }
        }
        Model::RealLine | Model::IntegerLine | Model::MinWap => {
            let family = match model {
                Model::RealLine => TwoPointFamily::RealLine,
                Model::IntegerLine => TwoPointFamily::IntegerLine,
                _ => TwoPointFamily::MinWap,
            };
            let level = if cur.eat_str("ap") {
                ChainLevel::Ap
            } else if cur.eat_str("full") {
                ChainLevel::Full
            } else {
                return Err(cur.error("expected \"ap\" or \"full\""));
            };
            Ok(TopologyGrade::TwoPoint {
                model: family,
                level,
            })
        }
        Model::Axb => {
            let level = if cur.eat_str("realline") {
                AxbLevel::RealLine
            } else if cur.eat_str("ap") {
                AxbLevel::Ap
            } else if cur.eat_str("full") {
                AxbLevel::Full
            } else {
                return Err(cur.error("expected \"ap\", \"realline\" or \"full\""));
            };
            Ok(TopologyGrade::Axb(level))
        }
        Model::Rationals => {
            if cur.eat_str("TOP") {
                return Ok(TopologyGrade::Rational(QGrade::Top));
            }
            cur.expect('{')?;
            let mut gens = std::collections::BTreeSet::new();
            if !cur.eat('}') {
                loop {
                    let w = cur.word()?;
                    let gen = if w == "R" {
                        QGen::R
                    } else {
                        let p: u64 = w
                            .parse()
                            .map_err(|_| cur.error(format!("bad generator {w:?}")))?;
                        QGen::prime(p).map_err(|e| cur.error(format!("{e}")))?
                    };
                    gens.insert(gen);
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
            Ok(TopologyGrade::Rational(QGrade::Generators(gens)))
        }
    }
}

/// Parses a spine element literal in the model's canonical shape, e.g.
/// `(L=span[[1,0]], v=[1/2,3])` or `(level=full, a=2, b=5)`.
pub fn parse_spine(model: &Model, text: &str) -> ParseResult<SpineElement> {
    let mut cur = Cursor::new(text);
    cur.expect('(')?;
    let elem = match model {
        Model::Compact => {
            if !cur.eat_str("e") {
                return Err(cur.error("expected the unit literal \"(e)\""));
            }
            make_spine(&mut cur, TopologyGrade::Compact, Representative::Unit)?
        }
        Model::Vector { group, dim } => {
            if !cur.eat_str("L=") {
                return Err(cur.error("expected \"L=\""));
            }
            let space = span_body(&mut cur, *dim)?;
            cur.expect(',')?;
            if !cur.eat_str("v=") {
                return Err(cur.error("expected \"v=\""));
            }
            let rep = match group {
                VectorGroup::Real => Representative::RealVector(rational_vector(&mut cur)?),
                VectorGroup::Integer => {
                    Representative::IntegerVector(integer_vector(&mut cur)?)
                }
            };
            make_spine(
                &mut cur,
                TopologyGrade::Vector {
                    group: *group,
                    space,
                },
                rep,
            )?
        }
        Model::RealLine | Model::IntegerLine | Model::MinWap => {
            if !cur.eat_str("level=") {
                return Err(cur.error("expected \"level=\""));
            }
            let grade = grade_body(&mut cur, model)?;
            cur.expect(',')?;
            if !cur.eat_str("x=") {
                return Err(cur.error("expected \"x=\""));
            }
            let rep = match model {
                Model::RealLine => Representative::Rational(cur.rational()?),
                Model::IntegerLine => Representative::Integer(cur.integer()?),
                _ => return Err(cur.error("minWAP has no representable points")),
            };
            make_spine(&mut cur, grade, rep)?
        }
        Model::Axb => {
            if !cur.eat_str("level=") {
                return Err(cur.error("expected \"level=\""));
            }
            let grade = grade_body(&mut cur, model)?;
            cur.expect(',')?;
            if !cur.eat_str("a=") {
                return Err(cur.error("expected \"a=\""));
            }
            let a = cur.rational()?;
            cur.expect(',')?;
            if !cur.eat_str("b=") {
                return Err(cur.error("expected \"b=\""));
            }
            let b = cur.rational()?;
            make_spine(&mut cur, grade, Representative::Axb { a, b })?
        }
        Model::Rationals => {
            if !cur.eat_str("S=") {
                return Err(cur.error("expected \"S=\""));
            }
            let grade = grade_body(&mut cur, model)?;
            cur.expect(',')?;
            if !cur.eat_str("r=") {
                return Err(cur.error("expected \"r=\""));
            }
            let rep = Representative::Rational(cur.rational()?);
            make_spine(&mut cur, grade, rep)?
        }
    };
    cur.expect(')')?;
    cur.finish()?;
    Ok(elem)
}

fn make_spine(
    cur: &mut Cursor,
    grade: TopologyGrade,
    rep: Representative,
) -> ParseResult<SpineElement> {
    let err = cur.error("");
    SpineElement::new(grade, rep).map_err(|e| SyntaxError {
        msg: format!("{e}"),
        ..err
    })
}

/// Parses a rational matrix literal `[[1,0],[0,1]]` (rows).
pub fn parse_matrix(text: &str) -> ParseResult<Vec<Vec<Rat>>> {
    let mut cur = Cursor::new(text);
    cur.expect('[')?;
    let mut rows = Vec::new();
    if !cur.eat(']') {
        loop {
            rows.push(rational_vector(&mut cur)?);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    cur.finish()?;
    Ok(rows)
}

/// Parses a rational vector literal `[1/2,-3]`.
pub fn parse_vector(text: &str) -> ParseResult<Vec<Rat>> {
    let mut cur = Cursor::new(text);
    let v = rational_vector(&mut cur)?;
    cur.finish()?;
    Ok(v)
}

/// Parses a coset ring expression over Z^m. Leaves are `Z` (the whole
/// group), `kZ` (the scaled lattice), or `H[[..],[..]]` (an explicit
/// integer generator matrix, columns generating); any leaf may carry a
/// shift, `[t]+leaf`. Combinators: `|` union, `&` intersection, `\`
/// difference, with `&` binding tighter; parentheses group.
pub fn parse_coset_expr(dim: usize, text: &str) -> ParseResult<CosetRingExpr> {
    let mut cur = Cursor::new(text);
    let e = coset_expr(&mut cur, dim)?;
    cur.finish()?;
    Ok(e)
}

fn coset_expr(cur: &mut Cursor, dim: usize) -> ParseResult<CosetRingExpr> {
    let mut acc = coset_term(cur, dim)?;
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some('|') => {
                cur.bump();
                let rhs = coset_term(cur, dim)?;
                acc = CosetRingExpr::union(acc, rhs)
                    .map_err(|e| cur.error(format!("{e}")))?;
            }
            Some('\\') => {
                cur.bump();
                let rhs = coset_term(cur, dim)?;
                acc = CosetRingExpr::difference(acc, rhs)
                    .map_err(|e| cur.error(format!("{e}")))?;
            }
            _ => return Ok(acc),
        }
    }
}

fn coset_term(cur: &mut Cursor, dim: usize) -> ParseResult<CosetRingExpr> {
    let mut acc = coset_factor(cur, dim)?;
    loop {
        cur.skip_ws();
        if cur.peek() == Some('&') {
            cur.bump();
            let rhs = coset_factor(cur, dim)?;
            acc = CosetRingExpr::intersection(acc, rhs)
                .map_err(|e| cur.error(format!("{e}")))?;
        } else {
            return Ok(acc);
        }
    }
}

fn coset_factor(cur: &mut Cursor, dim: usize) -> ParseResult<CosetRingExpr> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let e = coset_expr(cur, dim)?;
            cur.expect(')')?;
            Ok(e)
        }
        Some('[') => {
            let shift = integer_vector(cur)?;
            cur.expect('+')?;
            let sub = coset_subgroup(cur, dim)?;
            CosetRingExpr::coset(shift, sub).map_err(|e| cur.error(format!("{e}")))
        }
        _ => {
            let sub_or_full = coset_subgroup_or_full(cur, dim)?;
            Ok(sub_or_full)
        }
    }
}

fn coset_subgroup_or_full(cur: &mut Cursor, dim: usize) -> ParseResult<CosetRingExpr> {
    cur.skip_ws();
    if matches!(cur.peek(), Some('Z')) {
        cur.bump();
        return Ok(CosetRingExpr::Full(dim));
    }
    let sub = coset_subgroup(cur, dim)?;
    Ok(CosetRingExpr::subgroup(sub))
}

fn coset_subgroup(cur: &mut Cursor, dim: usize) -> ParseResult<FiniteIndexSubgroup> {
    cur.skip_ws();
    match cur.peek() {
        Some('H') => {
            cur.bump();
            cur.expect('[')?;
            let mut rows = Vec::new();
            if !cur.eat(']') {
                loop {
                    rows.push(integer_vector(cur)?);
                    if cur.eat(']') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(cur.error(format!(
                    "generator matrix must be {dim}x{dim} for this model"
                )));
            }
            FiniteIndexSubgroup::new(rows).map_err(|e| cur.error(format!("{e}")))
        }
        Some(c) if c.is_ascii_digit() || c == '-' => {
            let k = cur.integer()?;
            cur.expect('Z')?;
            let k: i64 = k
                .try_into()
                .map_err(|_| cur.error("scale factor out of range"))?;
            FiniteIndexSubgroup::scaled(dim, k).map_err(|e| cur.error(format!("{e}")))
        }
        _ => Err(cur.error("expected a subgroup: kZ, Z, or H[[..]]")),
    }
}

/// Canonical printing of a coset expression; the parser accepts exactly
/// this shape back.
pub fn print_coset_expr(e: &CosetRingExpr) -> String {
    match e {
        CosetRingExpr::Full(_) => "Z".to_string(),
        CosetRingExpr::Coset { shift, subgroup } => {
            let is_zero_shift = shift.iter().all(|x| x == &BigInt::from(0));
            let sub = print_subgroup(subgroup);
            if is_zero_shift {
                sub
            } else {
                let cells: Vec<String> = shift.iter().map(|x| x.to_string()).collect();
                format!("[{}]+{}", cells.join(","), sub)
            }
        }
        CosetRingExpr::Union(a, b) => {
            format!("({} | {})", print_coset_expr(a), print_coset_expr(b))
        }
        CosetRingExpr::Intersection(a, b) => {
            format!("({} & {})", print_coset_expr(a), print_coset_expr(b))
        }
        CosetRingExpr::Difference(a, b) => {
            format!("({} \\ {})", print_coset_expr(a), print_coset_expr(b))
        }
    }
}

fn print_subgroup(h: &FiniteIndexSubgroup) -> String {
    // scaled lattices print in the short form
    let dim = h.dim();
    let diag = h.hnf()[0][0].clone();
    let is_scaled = (0..dim).all(|i| {
        (0..dim).all(|j| {
            if i == j {
                h.hnf()[i][j] == diag
            } else {
                h.hnf()[i][j] == BigInt::from(0)
            }
        })
    });
    if is_scaled {
        return format!("{diag}Z");
    }
    let rows: Vec<String> = h
        .hnf()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("H[{}]", rows.join(","))
}
