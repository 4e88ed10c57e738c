//! Canonical JSON forms for grades, spine elements and graded elements.
//!
//! Rationals serialize as `p/q` strings, never floats. Objects print with
//! keys in sorted order, parts sorted by the serialized form of their
//! grade, frequencies in lexicographic order; parse then print is the
//! identity on canonical documents.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::algebra::GradedElement;
use crate::cyclo::CycRat;
use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::spine::{Representative, SpineElement};
use crate::subspace::RationalSubspace;
use crate::topology::{
    AxbLevel, ChainLevel, Model, QGen, QGrade, TopologyGrade, TwoPointFamily, VectorGroup,
};
use crate::trig::TrigPolynomial;

fn bad(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn as_str<'v>(v: &'v Value, what: &str) -> Result<&'v str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn field<'v>(map: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    map.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn rat_from(v: &Value, what: &str) -> Result<Rat> {
    parse_rat(as_str(v, what)?)
}

fn rat_vec_value(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rat(x))).collect())
}

fn rat_vec_from(v: &Value, what: &str) -> Result<Vec<Rat>> {
    as_array(v, what)?.iter().map(|x| rat_from(x, what)).collect()
}

fn int_vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn int_vec_from(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    as_array(v, what)?
        .iter()
        .map(|x| {
            as_str(x, what)?
                .parse::<BigInt>()
                .map_err(|_| bad(format!("{what}: bad integer")))
        })
        .collect()
}

fn subspace_rows_value(s: &RationalSubspace) -> Value {
    Value::Array(s.basis().iter().map(|row| rat_vec_value(row)).collect())
}

fn subspace_from_rows(v: &Value, ambient: usize) -> Result<RationalSubspace> {
    let rows = as_array(v, "subspace basis")?
        .iter()
        .map(|row| rat_vec_from(row, "basis row"))
        .collect::<Result<Vec<_>>>()?;
    RationalSubspace::from_rows(ambient, rows)
}

/// The canonical JSON form of a grade.
pub fn grade_to_value(grade: &TopologyGrade) -> Value {
    let model = grade.model().to_string();
    match grade {
        TopologyGrade::Compact => json!({ "model": model }),
        TopologyGrade::TwoPoint { level, .. } => json!({
            "level": match level { ChainLevel::Ap => "ap", ChainLevel::Full => "full" },
            "model": model,
        }),
        TopologyGrade::Axb(level) => json!({
            "level": match level {
                AxbLevel::Ap => "ap",
                AxbLevel::RealLine => "realline",
                AxbLevel::Full => "full",
            },
            "model": model,
        }),
        TopologyGrade::Vector { space, .. } => json!({
            "L": subspace_rows_value(space),
            "model": model,
        }),
        TopologyGrade::Rational(QGrade::Top) => json!({ "model": model, "top": true }),
        TopologyGrade::Rational(QGrade::Generators(gens)) => json!({
            "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "model": model,
        }),
    }
}

pub fn grade_from_value(v: &Value) -> Result<TopologyGrade> {
    let map = as_object(v, "grade")?;
    let model: Model = as_str(field(map, "model")?, "model")?.parse()?;
    match &model {
        Model::Compact => Ok(TopologyGrade::Compact),
        Model::RealLine | Model::IntegerLine | Model::MinWap => {
            let level = match as_str(field(map, "level")?, "level")? {
                "ap" => ChainLevel::Ap,
                "full" => ChainLevel::Full,
                other => return Err(bad(format!("unknown level {other:?}"))),
            };
            let family = match model {
                Model::RealLine => TwoPointFamily::RealLine,
                Model::IntegerLine => TwoPointFamily::IntegerLine,
                _ => TwoPointFamily::MinWap,
            };
            Ok(TopologyGrade::TwoPoint { model: family, level })
        }
        Model::Axb => {
            let level = match as_str(field(map, "level")?, "level")? {
                "ap" => AxbLevel::Ap,
                "realline" => AxbLevel::RealLine,
                "full" => AxbLevel::Full,
                other => return Err(bad(format!("unknown level {other:?}"))),
            };
            Ok(TopologyGrade::Axb(level))
        }
        Model::Vector { group, dim } => Ok(TopologyGrade::Vector {
            group: *group,
            space: subspace_from_rows(field(map, "L")?, *dim)?,
        }),
        Model::Rationals => {
            if map.get("top").and_then(Value::as_bool) == Some(true) {
                return Ok(TopologyGrade::Rational(QGrade::Top));
            }
            let gens = as_array(field(map, "generators")?, "generators")?
                .iter()
                .map(|g| {
                    let s = as_str(g, "generator")?;
                    if s == "R" {
                        Ok(QGen::R)
                    } else {
                        let p: u64 =
                            s.parse().map_err(|_| bad(format!("bad generator {s:?}")))?;
                        QGen::prime(p)
                    }
                })
                .collect::<Result<_>>()?;
            Ok(TopologyGrade::Rational(QGrade::Generators(gens)))
        }
    }
}

fn representative_to_value(rep: &Representative) -> Value {
    match rep {
        Representative::RealVector(v) => rat_vec_value(v),
        Representative::IntegerVector(v) => int_vec_value(v),
        Representative::Rational(r) => Value::String(format_rat(r)),
        Representative::Integer(x) => Value::String(x.to_string()),
        Representative::Axb { a, b } => json!({
            "a": format_rat(a),
            "b": format_rat(b),
        }),
        Representative::Unit => Value::String("e".to_string()),
    }
}

fn representative_from_value(model: &Model, v: &Value) -> Result<Representative> {
    Ok(match model {
        Model::Compact => {
            if as_str(v, "representative")? != "e" {
                return Err(bad("compact representatives are the unit \"e\""));
            }
            Representative::Unit
        }
        Model::RealLine | Model::Rationals => {
            Representative::Rational(rat_from(v, "representative")?)
        }
        Model::IntegerLine => Representative::Integer(
            as_str(v, "representative")?
                .parse()
                .map_err(|_| bad("bad integer representative"))?,
        ),
        Model::MinWap => {
            return Err(Error::UnsupportedScope(
                "representable points are not modeled for minWAP groups".into(),
            ))
        }
        Model::Vector {
            group: VectorGroup::Real,
            ..
        } => Representative::RealVector(rat_vec_from(v, "representative")?),
        Model::Vector {
            group: VectorGroup::Integer,
            ..
        } => Representative::IntegerVector(int_vec_from(v, "representative")?),
        Model::Axb => {
            let map = as_object(v, "representative")?;
            Representative::Axb {
                a: rat_from(field(map, "a")?, "a")?,
                b: rat_from(field(map, "b")?, "b")?,
            }
        }
    })
}

pub fn spine_to_value(s: &SpineElement) -> Value {
    json!({
        "grade": grade_to_value(s.grade()),
        "model": s.model().to_string(),
        "representative": representative_to_value(s.representative()),
    })
}

pub fn spine_from_value(v: &Value) -> Result<SpineElement> {
    let map = as_object(v, "spine element")?;
    let model: Model = as_str(field(map, "model")?, "model")?.parse()?;
    let grade = grade_from_value(field(map, "grade")?)?;
    if grade.model() != model {
        return Err(Error::ModelMismatch(
            model.to_string(),
            grade.model().to_string(),
        ));
    }
    let rep = representative_from_value(&model, field(map, "representative")?)?;
    SpineElement::new(grade, rep)
}

fn coeff_to_value(c: &CycRat) -> Value {
    if let Some((re, im)) = c.as_gaussian() {
        json!({ "im": format_rat(&im), "re": format_rat(&re) })
    } else {
        json!({
            "phases": c
                .terms()
                .iter()
                .map(|(q, coeff)| json!({ "c": format_rat(coeff), "q": format_rat(q) }))
                .collect::<Vec<_>>(),
        })
    }
}

fn coeff_from_value(v: &Value) -> Result<CycRat> {
    let map = as_object(v, "coefficient")?;
    if let Some(phases) = map.get("phases") {
        let mut raw = Vec::new();
        for t in as_array(phases, "phases")? {
            let tm = as_object(t, "phase term")?;
            raw.push((
                rat_from(field(tm, "q")?, "q")?,
                rat_from(field(tm, "c")?, "c")?,
            ));
        }
        return CycRat::build(raw);
    }
    Ok(CycRat::from_gaussian(
        rat_from(field(map, "re")?, "re")?,
        rat_from(field(map, "im")?, "im")?,
    ))
}

pub fn graded_to_value(u: &GradedElement) -> Value {
    let mut parts: Vec<(String, Value)> = u
        .parts()
        .iter()
        .map(|(grade, poly)| {
            let gv = grade_to_value(grade);
            let terms: Vec<Value> = poly
                .terms()
                .iter()
                .map(|(freq, coeff)| {
                    json!({ "coeff": coeff_to_value(coeff), "freq": rat_vec_value(freq) })
                })
                .collect();
            let key = serde_json::to_string(&gv).expect("grade serializes");
            (key, json!({ "grade": gv, "terms": terms }))
        })
        .collect();
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    json!({
        "model": u.model().to_string(),
        "parts": parts.into_iter().map(|(_, p)| p).collect::<Vec<_>>(),
    })
}

pub fn graded_from_value(v: &Value) -> Result<GradedElement> {
    let map = as_object(v, "graded element")?;
    let model: Model = as_str(field(map, "model")?, "model")?.parse()?;
    let mut raw = Vec::new();
    for part in as_array(field(map, "parts")?, "parts")? {
        let pm = as_object(part, "part")?;
        let grade = grade_from_value(field(pm, "grade")?)?;
        let mut terms = Vec::new();
        for t in as_array(field(pm, "terms")?, "terms")? {
            let tm = as_object(t, "term")?;
            terms.push((
                rat_vec_from(field(tm, "freq")?, "freq")?,
                coeff_from_value(field(tm, "coeff")?)?,
            ));
        }
        raw.push((grade, TrigPolynomial::from_terms(model.clone(), terms)?));
    }
    GradedElement::from_parts(model, raw)
}

pub fn graded_to_string(u: &GradedElement) -> String {
    serde_json::to_string(&graded_to_value(u)).expect("graded element serializes")
}

pub fn graded_from_str(s: &str) -> Result<GradedElement> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    graded_from_value(&v)
}

pub fn spine_to_string(s: &SpineElement) -> String {
    serde_json::to_string(&spine_to_value(s)).expect("spine element serializes")
}

pub fn spine_from_str(text: &str) -> Result<SpineElement> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    spine_from_value(&v)
}
