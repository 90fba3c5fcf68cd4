//! The `compute` operations: each takes named inputs as plain strings,
//! runs one library computation, and returns the rendered JSON document.
//!
//! Words are written as comma-separated vertex labels (`1,2,1,2`),
//! dimension vectors and mutation directions as comma-separated integers.
//! An empty string denotes the empty list.  Operations over a fixed finite
//! field take `--q`; exact computations in the field-size variable take
//! `--symbolic`; where both make sense, exactly one must be chosen.

use qtetra_core::cartan::ValuedQuiver;
use qtetra_core::cluster::{mutate, CharacterContext};
use qtetra_core::coeff::ScalarFraction;
use qtetra_core::feigin::psi_bar;
use qtetra_core::finrep::{rigid_rep, FieldTower, RepClass};
use qtetra_core::hall::{omega_symbolic, psi_tilde_symbolic, HallContext, HallElt};
use qtetra_core::shuffle::{shuffle_mul, ShuffleElt, Word};

use crate::data::{adapted_word, DataSet};
use crate::json::{
    self, hall_to_json, shuffle_to_json, torus_to_json, seed_to_json, ClassRefJson, CoeffJson,
};

fn split_list(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    s.split(',').map(str::trim).collect()
}

/// Comma-separated non-negative integers; empty string means empty list.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    split_list(s)
        .into_iter()
        .map(|t| t.parse().map_err(|_| format!("'{t}' is not a non-negative integer")))
        .collect()
}

/// Comma-separated integers; empty string means empty list.
pub fn parse_i64_list(s: &str) -> Result<Vec<i64>, String> {
    split_list(s)
        .into_iter()
        .map(|t| t.parse().map_err(|_| format!("'{t}' is not an integer")))
        .collect()
}

/// A word over the vertices of `quiver`, written with its vertex labels.
pub fn parse_word(quiver: &ValuedQuiver, s: &str) -> Result<Vec<usize>, String> {
    split_list(s)
        .into_iter()
        .map(|t| {
            quiver.labels().iter().position(|l| l == t).ok_or_else(|| {
                format!("'{t}' is not a vertex label (available: {})", quiver.labels().join(", "))
            })
        })
        .collect()
}

/// Dimension vector of the right rank.
fn parse_dims(quiver: &ValuedQuiver, s: &str) -> Result<Vec<i64>, String> {
    let dims = parse_i64_list(s)?;
    if dims.len() != quiver.rank() {
        return Err(format!(
            "dimension vector {dims:?} has {} entries, the quiver has {} vertices",
            dims.len(),
            quiver.rank()
        ));
    }
    if dims.iter().any(|&v| v < 0) {
        return Err(format!("dimension vector {dims:?} has a negative entry"));
    }
    Ok(dims)
}

/// `Ok(Some(q))` in fixed-field mode, `Ok(None)` in symbolic mode.
fn fixed_or_symbolic(q: Option<u64>, symbolic: bool) -> Result<Option<u64>, String> {
    match (q, symbolic) {
        (Some(q), false) => Ok(Some(q)),
        (None, true) => Ok(None),
        _ => Err("pass exactly one of --q <prime power> and --symbolic".into()),
    }
}

/// The adapted word for `quiver`, or the word the caller spelled out.
fn word_or_adapted(quiver: &ValuedQuiver, word: Option<&str>) -> Result<Vec<usize>, String> {
    match word {
        Some(s) => Ok(parse_word(quiver, s)?),
        None => Ok(adapted_word(quiver)),
    }
}

/// A representation class named as `dims` or `dims@index`, where `index`
/// picks within the deterministic enumeration of that dimension vector.
fn parse_class(ctx: &mut HallContext, s: &str) -> Result<RepClass, String> {
    let (dims, index) = match s.split_once('@') {
        Some((d, i)) => {
            let index: usize = i
                .trim()
                .parse()
                .map_err(|_| format!("'{i}' is not a class index"))?;
            (d, index)
        }
        None => (s, 0),
    };
    let dims = parse_dims(ctx.quiver(), dims)?;
    let classes = ctx.classes_of(&dims);
    if index >= classes.len() {
        return Err(format!(
            "class index {index} out of range: dimension {dims:?} has {} classes",
            classes.len()
        ));
    }
    Ok(classes[index].clone())
}

fn class_ref(ctx: &mut HallContext, class: &RepClass) -> ClassRefJson {
    let dims = class.dims().clone();
    let index = ctx
        .classes_of(&dims)
        .iter()
        .position(|c| c == class)
        .expect("a class produced by the context appears in its own enumeration");
    ClassRefJson { dims, index }
}

/// Shuffle product of two basis words over a bundled Cartan datum.
pub fn shuffle_mul_op(data: &DataSet, quiver: &str, x: &str, y: &str) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let cartan = quiver.cartan();
    let x = ShuffleElt::<ScalarFraction>::from_word(Word::new(parse_word(quiver, x)?));
    let y = ShuffleElt::from_word(Word::new(parse_word(quiver, y)?));
    let prod = shuffle_mul(&cartan, &x, &y);
    Ok(json::render(&shuffle_to_json(&prod, CoeffJson::from_fraction)))
}

/// Image of a basis word under the word map into the quantum polynomial
/// ring for the word `i` (default: the doubled adapted word).
pub fn feigin_op(
    data: &DataSet,
    quiver: &str,
    word: Option<&str>,
    x: &str,
) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let i_word = word_or_adapted(quiver, word)?;
    let x = ShuffleElt::<ScalarFraction>::from_word(Word::new(parse_word(quiver, x)?));
    let image = psi_bar(&quiver.cartan(), &i_word, &x);
    Ok(json::render(&torus_to_json(&image, CoeffJson::from_fraction)))
}

/// Dual Hall image in the shuffle algebra of the rigid class with the
/// given dimension vector — over a fixed field or symbolically in the
/// field size.
pub fn omega_op(
    data: &DataSet,
    quiver: &str,
    dim: &str,
    q: Option<u64>,
    symbolic: bool,
) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let nu = parse_dims(quiver, dim)?;
    match fixed_or_symbolic(q, symbolic)? {
        None => {
            let image = omega_symbolic(quiver, &nu)?;
            Ok(json::render(&shuffle_to_json(&image, CoeffJson::from_fraction)))
        }
        Some(q) => {
            let mut ctx = HallContext::new(quiver.clone(), q)?;
            let rep = rigid_rep(ctx.tower(), ctx.quiver(), &nu)?;
            let class = ctx.class_of(&rep);
            let image = ctx.omega_class(&class);
            Ok(json::render(&shuffle_to_json(&image, CoeffJson::from_sqrt)))
        }
    }
}

/// Quantum character of the rigid class with the given dimension vector,
/// through the Hall algebra, for the word `i`.
pub fn psi_tilde_op(
    data: &DataSet,
    quiver: &str,
    dim: &str,
    word: Option<&str>,
    q: Option<u64>,
    symbolic: bool,
) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let nu = parse_dims(quiver, dim)?;
    let i_word = word_or_adapted(quiver, word)?;
    match fixed_or_symbolic(q, symbolic)? {
        None => {
            let character = psi_tilde_symbolic(quiver, &i_word, &nu)?;
            Ok(json::render(&torus_to_json(&character, CoeffJson::from_fraction)))
        }
        Some(q) => {
            let mut ctx = HallContext::new(quiver.clone(), q)?;
            let rep = rigid_rep(ctx.tower(), ctx.quiver(), &nu)?;
            let class = ctx.class_of(&rep);
            let character = ctx.psi_tilde_class(&i_word, &class);
            Ok(json::render(&torus_to_json(&character, CoeffJson::from_sqrt)))
        }
    }
}

/// Product of two rescaled dual classes `[V]* [W]*` over a fixed field.
/// Classes are named `dims` or `dims@index`.
pub fn hall_mul_op(
    data: &DataSet,
    quiver: &str,
    q: u64,
    x: &str,
    y: &str,
) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let mut ctx = HallContext::new(quiver.clone(), q)?;
    let cx = parse_class(&mut ctx, x)?;
    let cy = parse_class(&mut ctx, y)?;
    let ex = HallElt::from_class(cx, ctx.one());
    let ey = HallElt::from_class(cy, ctx.one());
    let prod = ctx.dual_mul(&ex, &ey);
    Ok(json::render(&hall_to_json(&prod, &mut |c| class_ref(&mut ctx, c))))
}

/// Apply a mutation sequence to the initial quantum seed for the word `i`
/// and print the resulting seed.
pub fn mutate_op(
    data: &DataSet,
    quiver: &str,
    word: Option<&str>,
    directions: &str,
) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let i_word = word_or_adapted(quiver, word)?;
    let ctx = CharacterContext::new(quiver, &i_word)?;
    let mut seed = ctx.seed();
    for k in parse_usize_list(directions)? {
        seed = mutate(&seed, k)?;
    }
    Ok(json::render(&seed_to_json(&seed)))
}

/// Quantum cluster character of the rigid class with the given dimension
/// vector, for the word `i`.
pub fn character_op(
    data: &DataSet,
    quiver: &str,
    dim: &str,
    word: Option<&str>,
    q: Option<u64>,
    symbolic: bool,
) -> Result<String, String> {
    let quiver = data.get(quiver)?;
    let nu = parse_dims(quiver, dim)?;
    let i_word = word_or_adapted(quiver, word)?;
    let ctx = CharacterContext::new(quiver, &i_word)?;
    match fixed_or_symbolic(q, symbolic)? {
        None => {
            let character = ctx.character_symbolic(&nu)?;
            Ok(json::render(&torus_to_json(&character, CoeffJson::from_fraction)))
        }
        Some(q) => {
            let tower = FieldTower::for_quiver(quiver, q)?;
            let rep = rigid_rep(&tower, quiver, &nu)?;
            let character = ctx.character_at(&tower, &rep);
            Ok(json::render(&torus_to_json(&character, CoeffJson::from_sqrt)))
        }
    }
}
