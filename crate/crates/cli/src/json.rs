//! JSON schemas for every value the binary emits, with exact conversions
//! in both directions.
//!
//! Serialization is structural rather than textual: Laurent coefficients
//! become lists of `(half-exponent, integer)` terms, fractions carry their
//! numerator and denominator separately, and fixed-field scalars list
//! their rational coordinates.  Parsing an emitted document therefore
//! recovers the original value exactly, and emission is deterministic
//! because every term list follows the ordered in-memory representation.

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};

use qtetra_core::cartan::ValuedQuiver;
use qtetra_core::cluster::Seed;
use qtetra_core::coeff::{LaurentScalar, Scalar, ScalarFraction, SqrtQScalar};
use qtetra_core::finrep::RepClass;
use qtetra_core::hall::HallElt;
use qtetra_core::qtorus::TorusElt;
use qtetra_core::shuffle::{ShuffleElt, Word};

/// A coefficient in one of the three scalar domains used by the library.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CoeffJson {
    /// Integer Laurent polynomial in `v^(1/2)`: terms `(half_exp, coeff)`.
    #[serde(rename = "laurent")]
    Laurent { terms: Vec<(i64, String)> },
    /// Quotient of two Laurent polynomials in `v^(1/2)`.
    #[serde(rename = "fraction")]
    Fraction { num: Vec<(i64, String)>, den: Vec<(i64, String)> },
    /// Element of `Q(q^(1/4))` at a fixed field size: rational
    /// coordinates with respect to `1, q^(1/4), q^(1/2), q^(3/4)`.
    #[serde(rename = "sqrt-q")]
    SqrtQ { q: u64, coords: Vec<String> },
}

fn laurent_terms(x: &LaurentScalar) -> Vec<(i64, String)> {
    x.iter_terms().map(|(e, c)| (e, c.to_string())).collect()
}

fn laurent_from_terms(terms: &[(i64, String)]) -> Result<LaurentScalar, String> {
    let mut out = LaurentScalar::zero();
    for (e, c) in terms {
        let c: BigInt = c
            .parse()
            .map_err(|_| format!("'{c}' is not an integer coefficient"))?;
        out = &out + &LaurentScalar::monomial(*e, c);
    }
    Ok(out)
}

impl CoeffJson {
    pub fn from_laurent(x: &LaurentScalar) -> CoeffJson {
        CoeffJson::Laurent { terms: laurent_terms(x) }
    }

    pub fn from_fraction(x: &ScalarFraction) -> CoeffJson {
        CoeffJson::Fraction {
            num: laurent_terms(x.numerator()),
            den: laurent_terms(x.denominator()),
        }
    }

    pub fn from_sqrt(x: &SqrtQScalar) -> CoeffJson {
        CoeffJson::SqrtQ {
            q: x.q_value(),
            coords: x.coords().iter().map(|r| r.to_string()).collect(),
        }
    }

    pub fn to_laurent(&self) -> Result<LaurentScalar, String> {
        match self {
            CoeffJson::Laurent { terms } => laurent_from_terms(terms),
            _ => Err("expected a laurent coefficient".into()),
        }
    }

    pub fn to_fraction(&self) -> Result<ScalarFraction, String> {
        match self {
            CoeffJson::Fraction { num, den } => {
                let num = laurent_from_terms(num)?;
                let den = laurent_from_terms(den)?;
                if den.is_zero() {
                    return Err("fraction with zero denominator".into());
                }
                Ok(ScalarFraction::new(num, den))
            }
            _ => Err("expected a fraction coefficient".into()),
        }
    }

    pub fn to_sqrt(&self) -> Result<SqrtQScalar, String> {
        let CoeffJson::SqrtQ { q, coords } = self else {
            return Err("expected a sqrt-q coefficient".into());
        };
        if coords.len() != 4 {
            return Err(format!("sqrt-q value has {} coordinates, wants 4", coords.len()));
        }
        let mut parsed = Vec::with_capacity(4);
        for c in coords {
            let r: BigRational = c
                .parse()
                .map_err(|_| format!("'{c}' is not a rational coordinate"))?;
            parsed.push(r);
        }
        if *q == 0 {
            if parsed[1..].iter().any(|r| !r.is_zero()) {
                return Err("context-free value with root coordinates".into());
            }
            return Ok(SqrtQScalar::from_rational(parsed[0].clone()));
        }
        if *q < 2 {
            return Err(format!("field size {q} is not a prime power"));
        }
        let mut out = SqrtQScalar::zero_with_q(*q);
        for (k, r) in parsed.into_iter().enumerate() {
            let root = SqrtQScalar::q_quarter_pow(*q, k as i64);
            out = out.add(&SqrtQScalar::from_rational(r).mul(&root));
        }
        Ok(out)
    }
}

/// One term of a shuffle-algebra element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShuffleTermJson {
    pub word: Vec<usize>,
    pub coeff: CoeffJson,
}

/// A shuffle-algebra element as an ordered term list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShuffleJson {
    pub terms: Vec<ShuffleTermJson>,
}

pub fn shuffle_to_json<S: Scalar>(
    x: &ShuffleElt<S>,
    mut coeff: impl FnMut(&S) -> CoeffJson,
) -> ShuffleJson {
    ShuffleJson {
        terms: x
            .iter()
            .map(|(w, c)| ShuffleTermJson { word: w.letters().to_vec(), coeff: coeff(c) })
            .collect(),
    }
}

pub fn shuffle_from_json<S: Scalar>(
    x: &ShuffleJson,
    mut coeff: impl FnMut(&CoeffJson) -> Result<S, String>,
) -> Result<ShuffleElt<S>, String> {
    let mut out = ShuffleElt::zero();
    for term in &x.terms {
        out.add_term(Word::new(term.word.clone()), coeff(&term.coeff)?);
    }
    Ok(out)
}

/// One term of a quantum polynomial / torus element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusTermJson {
    pub exponent: Vec<i64>,
    pub coeff: CoeffJson,
}

/// A quantum polynomial or torus element as an ordered term list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusJson {
    pub terms: Vec<TorusTermJson>,
}

pub fn torus_to_json<S: Scalar>(
    x: &TorusElt<S>,
    mut coeff: impl FnMut(&S) -> CoeffJson,
) -> TorusJson {
    TorusJson {
        terms: x
            .iter()
            .map(|(a, c)| TorusTermJson { exponent: a.clone(), coeff: coeff(c) })
            .collect(),
    }
}

pub fn torus_from_json<S: Scalar>(
    x: &TorusJson,
    mut coeff: impl FnMut(&CoeffJson) -> Result<S, String>,
) -> Result<TorusElt<S>, String> {
    let mut out = TorusElt::zero();
    for term in &x.terms {
        out.add_term(term.exponent.clone(), coeff(&term.coeff)?);
    }
    Ok(out)
}

/// A representation class named by its dimension vector and its position
/// within the deterministic enumeration of classes of that dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRefJson {
    pub dims: Vec<i64>,
    pub index: usize,
}

/// One term of a Hall-algebra element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HallTermJson {
    pub class: ClassRefJson,
    pub coeff: CoeffJson,
}

/// A Hall-algebra element as an ordered term list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HallJson {
    pub terms: Vec<HallTermJson>,
}

pub fn hall_to_json(
    x: &HallElt<SqrtQScalar>,
    class_ref: &mut dyn FnMut(&RepClass) -> ClassRefJson,
) -> HallJson {
    HallJson {
        terms: x
            .iter()
            .map(|(class, c)| HallTermJson { class: class_ref(class), coeff: CoeffJson::from_sqrt(c) })
            .collect(),
    }
}

/// A quantum seed: exchange data plus the current cluster variables in
/// initial-cluster coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedJson {
    pub btilde: Vec<Vec<i64>>,
    pub two_lambda: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    pub cluster: Vec<TorusJson>,
}

pub fn seed_to_json(seed: &Seed) -> SeedJson {
    SeedJson {
        btilde: seed.btilde().to_vec(),
        two_lambda: seed.two_lambda().to_vec(),
        symmetrizers: seed.symmetrizers().to_vec(),
        cluster: seed
            .variables()
            .iter()
            .map(|x| torus_to_json(x, CoeffJson::from_fraction))
            .collect(),
    }
}

/// A valued quiver: vertex labels, vertex weights, and arrows with
/// multiplicities.  This is the schema of external data files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub labels: Vec<String>,
    pub weights: Vec<i64>,
    pub arrows: Vec<(usize, usize, u32)>,
}

impl QuiverJson {
    pub fn from_quiver(q: &ValuedQuiver) -> QuiverJson {
        let n = q.rank();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let m = q.arrow_mult(i, j);
                if m > 0 {
                    arrows.push((i, j, m));
                }
            }
        }
        QuiverJson { labels: q.labels().to_vec(), weights: q.weights().to_vec(), arrows }
    }

    pub fn to_quiver(&self) -> Result<ValuedQuiver, String> {
        ValuedQuiver::new(self.labels.clone(), self.weights.clone(), &self.arrows)
    }
}

/// Pretty-print any schema value; emission is deterministic because the
/// schemas use struct fields and ordered term lists throughout.
pub fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("schema values always serialize")
}
