//! Function descriptions accepted by `--function`.
//!
//! String forms: `exp:<re>[,<im>]`, `sin-pi`, `sin_kpi:<k>`, `poly:<json>`,
//! `sine_mix:<json>`, `taylor:<json>`, or `@path.json` holding the tagged
//! JSON form, e.g. `{"sine_mix": [[1, 2.0], [2, -3.0]]}`.

use std::fs;

use lidstone::{ComplexValue, EntireFunctionModel, RationalPolynomial};
use serde::Deserialize;

use crate::InputError;

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Num> for ComplexValue {
    fn from(n: Num) -> Self {
        match n {
            Num::Real(x) => ComplexValue::new(x, 0.0),
            Num::Complex([re, im]) => ComplexValue::new(re, im),
        }
    }
}

/// A polynomial as the canonical encoding or a plain coefficient list whose
/// entries are numbers or `"p/q"` strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Encoded(RationalPolynomial),
    List(Vec<serde_json::Value>),
}

impl PolySpec {
    fn into_polynomial(self) -> Result<RationalPolynomial, InputError> {
        match self {
            PolySpec::Encoded(p) => Ok(p),
            PolySpec::List(values) => {
                let pairs = values
                    .iter()
                    .map(|v| {
                        let text = match v {
                            serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
                            serde_json::Value::String(s) => s.clone(),
                            other => {
                                return Err(InputError(format!(
                                    "coefficient {other} must be an integer or \"p/q\""
                                )))
                            }
                        };
                        let (num, den) = text.split_once('/').unwrap_or((&text, "1"));
                        Ok(serde_json::json!([num.trim(), den.trim()]))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                RationalPolynomial::from_json(&serde_json::json!({ "coeffs": pairs }).to_string())
                    .map_err(|e| InputError(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct TaylorSpec {
    pub derivs: Vec<Num>,
    #[serde(rename = "type", default)]
    pub declared_type: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum TaylorInput {
    Full(TaylorSpec),
    Bare(Vec<Num>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Exp(Num),
    SinKpi(u32),
    Poly(PolySpec),
    SineMix(Vec<(u32, Num)>),
    Taylor(TaylorSpec),
}

fn parse_json<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError(format!("invalid {what} JSON: {e}")))
}

/// `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<ComplexValue, InputError> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| InputError(format!("invalid number {s:?}")))
    };
    match text.split_once(',') {
        Some((re, im)) => Ok(ComplexValue::new(parse(re)?, parse(im)?)),
        None => Ok(ComplexValue::new(parse(text)?, 0.0)),
    }
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        if let Some(path) = text.strip_prefix('@') {
            let body = fs::read_to_string(path)
                .map_err(|e| InputError(format!("cannot read {path}: {e}")))?;
            return parse_json("function file", &body);
        }
        let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "exp" => {
                let z = parse_complex(arg)?;
                Ok(FunctionSpec::Exp(Num::Complex([z.re, z.im])))
            }
            "sin-pi" if arg.is_empty() => Ok(FunctionSpec::SinKpi(1)),
            "sin_kpi" | "sin-kpi" => arg
                .trim()
                .parse()
                .map(FunctionSpec::SinKpi)
                .map_err(|_| InputError(format!("invalid frequency {arg:?}"))),
            "poly" => {
                let spec: PolySpec = parse_json("polynomial", arg)?;
                Ok(FunctionSpec::Poly(PolySpec::Encoded(
                    spec.into_polynomial()?,
                )))
            }
            "sine_mix" | "sine-mix" => Ok(FunctionSpec::SineMix(parse_json("sine mix", arg)?)),
            "taylor" => Ok(FunctionSpec::Taylor(
                match parse_json::<TaylorInput>("Taylor data", arg)? {
                    TaylorInput::Full(t) => t,
                    TaylorInput::Bare(derivs) => TaylorSpec {
                        derivs,
                        declared_type: None,
                    },
                },
            )),
            _ => Err(InputError(format!("unknown function spec {text:?}"))),
        }
    }

    /// The polynomial, when this spec denotes one.
    pub fn polynomial(&self) -> Result<Option<RationalPolynomial>, InputError> {
        match self {
            FunctionSpec::Poly(p) => p.clone().into_polynomial().map(Some),
            _ => Ok(None),
        }
    }

    pub fn model(&self) -> Result<EntireFunctionModel, lidstone::Error> {
        match self {
            FunctionSpec::Exp(z) => EntireFunctionModel::exp((*z).into()),
            FunctionSpec::SinKpi(k) => EntireFunctionModel::sin_kpi(*k),
            FunctionSpec::Poly(p) => {
                let p = p
                    .clone()
                    .into_polynomial()
                    .map_err(|e| lidstone::Error::Encoding(e.0))?;
                EntireFunctionModel::polynomial(&p)
            }
            FunctionSpec::SineMix(terms) => {
                let terms: Vec<_> = terms.iter().map(|&(k, c)| (k, c.into())).collect();
                EntireFunctionModel::sine_mix(&terms)
            }
            FunctionSpec::Taylor(t) => EntireFunctionModel::from_taylor(
                t.derivs.iter().map(|&d| d.into()).collect(),
                t.declared_type,
            ),
        }
    }
}
