//! Exact scalar arithmetic for all quantum-algebra computations.
//!
//! The ambient coefficient ring is the Laurent polynomial ring
//! `Z[v^(1/2), v^(-1/2)]` in a square root of the quantum parameter `v`,
//! where `q = v^2`.  A [`LaurentScalar`] stores a finite map from
//! *half-exponents* to integer coefficients: the key `e` denotes the monomial
//! `v^(e/2)`, so `q = v^2` has half-exponent `4` and the typical
//! half-integer powers of `v` produced by shuffle products have odd keys.
//!
//! [`ScalarFraction`] is the fraction field element `num/den` kept in a
//! canonical reduced form, used whenever divided powers introduce genuine
//! denominators such as `1/[n]!`.
//!
//! [`SqrtQScalar`] is the value ring for fixed-field computations: the
//! specialization `v = sqrt(q)` sends the monomial with half-exponent `e` to
//! `q^(e/4)`, so the target is the ring `Q(q^(1/4))`, represented exactly by
//! four rational coordinates (fewer survive normalization when `q` is a
//! perfect square or fourth power).
//!
//! Two classical families of `q`-binomials are provided: the "counting"
//! normalization `qbinom` with `(n)_q = 1 + q + ... + q^(n-1)`, and the
//! bar-invariant normalization `qbinom_bar` built from the balanced quantum
//! integers `[n] = v^(1-n) + v^(3-n) + ... + v^(n-1)`.  The subscript
//! parameter `d` replaces `q` by `q^d` (equivalently `v` by `v^d`).

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Integer Laurent polynomial in `v^(1/2)`.
///
/// Keys of `terms` are half-exponents (`e` represents `v^(e/2)`); values are
/// the nonzero integer coefficients.  The map never stores a zero
/// coefficient, which makes structural equality coincide with ring equality.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash, PartialOrd, Ord)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(0, n);
        }
        LaurentScalar { terms }
    }

    /// The monomial `v^(half_exp/2)`, e.g. `v_half_pow(2) = v` and
    /// `v_half_pow(4) = q`.
    pub fn v_half_pow(half_exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(half_exp, BigInt::one());
        LaurentScalar { terms }
    }

    /// The monomial `c * v^(half_exp/2)`.
    pub fn monomial(half_exp: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_exp, c);
        }
        LaurentScalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    /// Iterate over `(half_exponent, coefficient)` pairs in ascending order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, half_exp: i64) -> BigInt {
        self.terms.get(&half_exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn min_half_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_half_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiply by the monomial `v^(half_exp/2)` (shift all exponents).
    pub fn mul_v_half_pow(&self, half_exp: i64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e + half_exp, c.clone())).collect();
        LaurentScalar { terms }
    }

    /// The bar involution `v^(1/2) -> v^(-1/2)` (negate all exponents).
    pub fn bar(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        LaurentScalar { terms }
    }

    /// Exact division: returns `Some(self / rhs)` when the quotient is again
    /// an integer Laurent polynomial, `None` otherwise.  Division by zero is
    /// an error on the caller's side and panics.
    pub fn exact_div(&self, rhs: &LaurentScalar) -> Option<LaurentScalar> {
        assert!(!rhs.is_zero(), "division of LaurentScalar by zero");
        if self.is_zero() {
            return Some(LaurentScalar::zero());
        }
        // Shift both operands so they become ordinary polynomials in
        // x = v^(1/2), divide over Q, then check integrality and shift back.
        let a_min = self.min_half_exp().unwrap();
        let b_min = rhs.min_half_exp().unwrap();
        let a = self.to_dense(a_min);
        let b = rhs.to_dense(b_min);
        let (quot, rem) = poly_div_rational(&a, &b)?;
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (i, c) in quot.iter().enumerate() {
            if !c.is_integer() {
                return None;
            }
            let c = c.to_integer();
            if !c.is_zero() {
                terms.insert(a_min - b_min + i as i64, c);
            }
        }
        Some(LaurentScalar { terms })
    }

    /// Dense coefficient vector of `self / v^(base/2)`, ascending from
    /// exponent `base` (callers pass `base = min_half_exp()`).
    fn to_dense(&self, base: i64) -> Vec<BigInt> {
        let max = self.max_half_exp().unwrap();
        let mut out = vec![BigInt::zero(); (max - base + 1) as usize];
        for (e, c) in &self.terms {
            out[(e - base) as usize] = c.clone();
        }
        out
    }

    fn from_dense(base: i64, coeffs: &[BigInt]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(base + i as i64, c.clone());
            }
        }
        LaurentScalar { terms }
    }

    /// Exact specialization `v = sqrt(q)`: the half-exponent `e` monomial
    /// evaluates to `q^(e/4)` inside `Q(q^(1/4))`.
    pub fn specialize(&self, q: u64) -> SqrtQScalar {
        assert!(q >= 2, "specialization needs a field size q >= 2");
        let mut out = SqrtQScalar::zero_with_q(q);
        for (e, c) in &self.terms {
            out = out.add(&SqrtQScalar::q_quarter_pow(q, *e).scale_int(c));
        }
        out
    }

    /// Substitute `q = v^2` into a polynomial in `q` with integer
    /// coefficients (`coeffs[k]` is the coefficient of `q^k`).
    pub fn from_q_poly(coeffs: &[BigInt]) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(4 * k as i64, c.clone());
            }
        }
        LaurentScalar { terms }
    }

    /// Render one monomial for display.
    fn fmt_monomial(e: i64, c: &BigInt, lead: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, abs) = if c.sign() == Sign::Minus {
            ("-", -c.clone())
        } else {
            ("+", c.clone())
        };
        if lead {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", sign)?;
        }
        let power = match e {
            0 => String::new(),
            2 => "v".to_string(),
            e if e % 2 == 0 => format!("v^{}", e / 2),
            e => format!("v^({}/2)", e),
        };
        if power.is_empty() {
            write!(f, "{}", abs)
        } else if abs.is_one() {
            write!(f, "{}", power)
        } else {
            write!(f, "{}*{}", abs, power)
        }
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut lead = true;
        for (e, c) in &self.terms {
            LaurentScalar::fmt_monomial(*e, c, lead, f)?;
            lead = false;
        }
        Ok(())
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c);
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let neg = -c.clone();
            out.insert_add(*e, &neg);
        }
        out
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect();
        LaurentScalar { terms }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let prod = c1 * c2;
                out.insert_add(e1 + e2, &prod);
            }
        }
        out
    }
}

/// Long division over `Q` of dense ascending polynomials; returns
/// `(quotient, remainder)` or `None` when the divisor is zero.
fn poly_div_rational(a: &[BigInt], b: &[BigInt]) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
    let bdeg = b.iter().rposition(|c| !c.is_zero())?;
    let mut rem: Vec<BigRational> =
        a.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let blead = BigRational::from_integer(b[bdeg].clone());
    let adeg = rem.len().saturating_sub(1);
    if adeg < bdeg {
        return Some((vec![BigRational::zero()], rem));
    }
    let mut quot = vec![BigRational::zero(); adeg - bdeg + 1];
    for i in (bdeg..=adeg).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let factor = &rem[i] / &blead;
        quot[i - bdeg] = factor.clone();
        for (j, bc) in b.iter().enumerate().take(bdeg + 1) {
            let delta = &factor * BigRational::from_integer(bc.clone());
            rem[i - bdeg + j] -= delta;
        }
    }
    rem.truncate(bdeg.max(1));
    Some((quot, rem))
}

/// Content (gcd of coefficients) of a dense integer polynomial.
fn poly_content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    g
}

/// Greatest common divisor in `Z[x]` of dense ascending polynomials, via the
/// primitive Euclidean algorithm with pseudo-division.  The result is
/// primitive up to the gcd of the two contents, with positive leading
/// coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
        while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
            p.pop();
        }
        p
    }
    fn primitive(p: &[BigInt]) -> Vec<BigInt> {
        let c = poly_content(p);
        if c.is_zero() {
            return p.to_vec();
        }
        p.iter().map(|x| x / &c).collect()
    }
    let mut f = trim(a.to_vec());
    let mut g = trim(b.to_vec());
    if f.iter().all(|c| c.is_zero()) {
        return g;
    }
    if g.iter().all(|c| c.is_zero()) {
        return f;
    }
    let content = poly_content(&f).gcd(&poly_content(&g));
    f = primitive(&f);
    g = primitive(&g);
    while !g.iter().all(|c| c.is_zero()) {
        // Pseudo-remainder: lead(g)^(deg f - deg g + 1) * f mod g.
        let fd = f.len() - 1;
        let gd = g.len() - 1;
        if fd < gd {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        let lead = g[gd].clone();
        let mut r = f.clone();
        for _ in 0..(fd - gd + 1) {
            r = r.iter().map(|c| c * &lead).collect();
            let rd = r.len() - 1;
            if rd < gd || r[rd].is_zero() {
                r = trim(r);
                continue;
            }
            let factor = &r[rd] / &g[gd];
            for (j, gc) in g.iter().enumerate() {
                let delta = &factor * gc;
                r[rd - gd + j] -= delta;
            }
            r = trim(r);
        }
        f = g;
        g = primitive(&trim(r));
        if g.len() == 1 && g[0].is_zero() {
            break;
        }
        if g.len() == 1 {
            // Nonzero constant remainder: the primitive gcd is 1.
            f = vec![BigInt::one()];
            break;
        }
    }
    let mut out: Vec<BigInt> = primitive(&f).iter().map(|c| c * &content).collect();
    if out.last().map_or(false, |c| c.sign() == Sign::Minus) {
        out = out.iter().map(|c| -c).collect();
    }
    out
}

/// Canonical reduced fraction of Laurent scalars.
///
/// Invariants maintained by every constructor:
/// * the denominator is a nonzero polynomial in `v^(1/2)` with nonzero
///   constant term (all spare `v`-powers are moved into the numerator),
/// * numerator and denominator share no polynomial factor (including integer
///   content),
/// * the denominator's lowest nonzero coefficient is positive,
/// * `0` is represented as `0/1`.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct ScalarFraction {
    num: LaurentScalar,
    den: LaurentScalar,
}

impl ScalarFraction {
    pub fn zero() -> Self {
        ScalarFraction { num: LaurentScalar::zero(), den: LaurentScalar::one() }
    }

    pub fn one() -> Self {
        ScalarFraction { num: LaurentScalar::one(), den: LaurentScalar::one() }
    }

    pub fn from_laurent(num: LaurentScalar) -> Self {
        ScalarFraction { num, den: LaurentScalar::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentScalar::from_int(n))
    }

    /// Build `num/den` in canonical form.  Panics on a zero denominator.
    pub fn new(num: LaurentScalar, den: LaurentScalar) -> Self {
        assert!(!den.is_zero(), "zero denominator in ScalarFraction");
        let mut frac = ScalarFraction { num, den };
        frac.reduce();
        frac
    }

    pub fn numerator(&self) -> &LaurentScalar {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentScalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Return the fraction as a plain Laurent polynomial when the reduced
    /// denominator is `1`, `None` otherwise.
    pub fn as_laurent(&self) -> Option<&LaurentScalar> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Reduce to the canonical form described on the type.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentScalar::one();
            return;
        }
        // A denominator of 1 is already canonical; skip the gcd machinery
        // (the overwhelmingly common case in shuffle arithmetic).
        if self.den.is_one() {
            return;
        }
        // Move all v-powers out of the denominator (and strip the common
        // v-power of the numerator into the exponent lattice).
        let nd = self.den.min_half_exp().unwrap();
        let a_min = self.num.min_half_exp().unwrap();
        let num_dense = self.num.to_dense(a_min);
        let den_dense = self.den.to_dense(nd);
        let g = poly_gcd(&num_dense, &den_dense);
        let gl = LaurentScalar::from_dense(0, &g);
        let mut num_red = LaurentScalar::from_dense(a_min - nd, &num_dense)
            .exact_div(&gl)
            .expect("gcd division of numerator is exact");
        let mut den_red = LaurentScalar::from_dense(0, &den_dense)
            .exact_div(&gl)
            .expect("gcd division of denominator is exact");
        // Normalize the sign of the denominator by its lowest coefficient.
        let low = den_red.iter_terms().next().map(|(_, c)| c.clone()).unwrap();
        if low.sign() == Sign::Minus {
            num_red = -&num_red;
            den_red = -&den_red;
        }
        self.num = num_red;
        self.den = den_red;
    }

    pub fn add(&self, rhs: &ScalarFraction) -> ScalarFraction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        ScalarFraction::new(num, den)
    }

    pub fn sub(&self, rhs: &ScalarFraction) -> ScalarFraction {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        ScalarFraction::new(num, den)
    }

    pub fn mul(&self, rhs: &ScalarFraction) -> ScalarFraction {
        ScalarFraction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn neg(&self) -> ScalarFraction {
        ScalarFraction { num: -&self.num, den: self.den.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn invert(&self) -> Option<ScalarFraction> {
        if self.is_zero() {
            return None;
        }
        Some(ScalarFraction::new(self.den.clone(), self.num.clone()))
    }

    /// Bar involution applied to numerator and denominator.
    pub fn bar(&self) -> ScalarFraction {
        ScalarFraction::new(self.num.bar(), self.den.bar())
    }

    /// Multiply by the monomial `v^(half_exp/2)`.
    pub fn mul_v_half_pow(&self, half_exp: i64) -> ScalarFraction {
        ScalarFraction::new(self.num.mul_v_half_pow(half_exp), self.den.clone())
    }

    /// Exact evaluation at `v = sqrt(q)`; fails (returns `None`) when the
    /// denominator specializes to zero.
    pub fn specialize(&self, q: u64) -> Option<SqrtQScalar> {
        let den = self.den.specialize(q);
        let inv = den.invert()?;
        Some(self.num.specialize(q).mul(&inv))
    }
}

impl fmt::Display for ScalarFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Exact element of `Q(q^(1/4))` for a fixed field size `q`: the value of a
/// Laurent scalar under `v = sqrt(q)`.
///
/// The four coordinates are the rational coefficients of `1, r, r^2, r^3`
/// where `r = q^(1/4)`.  Normalization folds powers of `r` that happen to be
/// rational: when `q = s^2` the basis collapses to `1, sqrt(s)` and when
/// `q = m^4` everything is rational.  After normalization the representation
/// is unique, so structural equality is ring equality.
///
/// The `q = 0` value is a context-free rational (compatible with every `q`),
/// used for zeros and pure integers before any field size is known.
#[derive(Clone, Debug)]
pub struct SqrtQScalar {
    q: u64,
    c: [BigRational; 4],
}

impl PartialEq for SqrtQScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.c != other.c {
            return false;
        }
        // Purely rational values are equal regardless of field context.
        if self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero() {
            return true;
        }
        self.q == other.q
    }
}

impl Eq for SqrtQScalar {}

/// Integer square root test: `Some(s)` when `n == s*s`.
fn perfect_sqrt(n: u64) -> Option<u64> {
    let s = (n as f64).sqrt().round() as u64;
    for cand in s.saturating_sub(1)..=s + 1 {
        if cand.checked_mul(cand) == Some(n) {
            return Some(cand);
        }
    }
    None
}

impl SqrtQScalar {
    pub fn zero() -> Self {
        SqrtQScalar { q: 0, c: std::array::from_fn(|_| BigRational::zero()) }
    }

    pub fn zero_with_q(q: u64) -> Self {
        let mut z = Self::zero();
        z.q = q;
        z.normalize();
        z
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut out = Self::zero();
        out.c[0] = r;
        out
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n.clone()))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// The value `q^(e/4)` (e may be negative).
    pub fn q_quarter_pow(q: u64, e: i64) -> Self {
        assert!(q >= 2);
        let qq = BigRational::from_integer(BigInt::from(q));
        let whole = e.div_euclid(4);
        let frac = e.rem_euclid(4) as usize;
        let mut out = SqrtQScalar { q, c: std::array::from_fn(|_| BigRational::zero()) };
        let mut scale = BigRational::one();
        if whole >= 0 {
            for _ in 0..whole {
                scale *= &qq;
            }
        } else {
            for _ in 0..(-whole) {
                scale /= &qq;
            }
        }
        out.c[frac] = scale;
        out.normalize();
        out
    }

    pub fn q_value(&self) -> u64 {
        self.q
    }

    /// Rational coordinates with respect to `1, r, r^2, r^3`, `r = q^(1/4)`.
    /// For square `q` the last two are always zero after normalization.
    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    /// The purely rational part (coefficient of `1`).
    pub fn rational_part(&self) -> &BigRational {
        &self.c[0]
    }

    /// Coefficient of `sqrt(q)` when the value lies in `Q(sqrt(q))`:
    /// `Some(b)` with `self = a + b*sqrt(q)`, `None` when genuine fourth
    /// roots are present.
    pub fn sqrt_part(&self) -> Option<BigRational> {
        if !self.c[1].is_zero() || !self.c[3].is_zero() {
            return None;
        }
        Some(self.c[2].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    /// Fold rational powers of `r = q^(1/4)` into lower coordinates so that
    /// the coordinate vector is unique for the value.
    fn normalize(&mut self) {
        if self.q == 0 {
            return;
        }
        if let Some(s) = perfect_sqrt(self.q) {
            if let Some(m) = perfect_sqrt(s) {
                // q = m^4: r = m is rational.
                let m = BigRational::from_integer(BigInt::from(m));
                let m2 = &m * &m;
                let m3 = &m2 * &m;
                self.c[0] = &self.c[0] + &self.c[1] * &m + &self.c[2] * &m2 + &self.c[3] * &m3;
                self.c[1] = BigRational::zero();
                self.c[2] = BigRational::zero();
                self.c[3] = BigRational::zero();
            } else {
                // q = s^2: r^2 = s is rational, r = sqrt(s) is not.
                let s = BigRational::from_integer(BigInt::from(s));
                self.c[0] = &self.c[0] + &self.c[2] * &s;
                self.c[1] = &self.c[1] + &self.c[3] * &s;
                self.c[2] = BigRational::zero();
                self.c[3] = BigRational::zero();
            }
        }
        if self.is_zero() && self.q != 0 {
            // Keep q: zero values stay comparable across contexts anyway.
        }
    }

    /// Common field size of two operands; panics on a genuine mismatch.
    fn join_q(&self, rhs: &SqrtQScalar) -> u64 {
        match (self.q, rhs.q) {
            (0, q) | (q, 0) => q,
            (a, b) => {
                assert!(a == b, "mixed field sizes in SqrtQScalar arithmetic: {} vs {}", a, b);
                a
            }
        }
    }

    pub fn add(&self, rhs: &SqrtQScalar) -> SqrtQScalar {
        let q = self.join_q(rhs);
        let c = std::array::from_fn(|i| &self.c[i] + &rhs.c[i]);
        let mut out = SqrtQScalar { q, c };
        out.normalize();
        out
    }

    pub fn sub(&self, rhs: &SqrtQScalar) -> SqrtQScalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SqrtQScalar {
        SqrtQScalar { q: self.q, c: std::array::from_fn(|i| -self.c[i].clone()) }
    }

    pub fn mul(&self, rhs: &SqrtQScalar) -> SqrtQScalar {
        let q = self.join_q(rhs);
        let qq = BigRational::from_integer(BigInt::from(q.max(1)));
        let mut acc = std::array::from_fn::<BigRational, 4, _>(|_| BigRational::zero());
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                let prod = &self.c[i] * &rhs.c[j];
                let k = i + j;
                if k < 4 {
                    acc[k] = &acc[k] + &prod;
                } else {
                    // r^4 = q.
                    acc[k - 4] = &acc[k - 4] + &(prod * &qq);
                }
            }
        }
        let mut out = SqrtQScalar { q, c: acc };
        out.normalize();
        out
    }

    pub fn scale_int(&self, n: &BigInt) -> SqrtQScalar {
        let f = BigRational::from_integer(n.clone());
        SqrtQScalar { q: self.q, c: std::array::from_fn(|i| &self.c[i] * &f) }
    }

    pub fn scale_rational(&self, f: &BigRational) -> SqrtQScalar {
        SqrtQScalar { q: self.q, c: std::array::from_fn(|i| &self.c[i] * f) }
    }

    /// Multiplicative inverse via a 4x4 rational solve against the
    /// multiplication-by-`self` matrix; `None` for zero.
    pub fn invert(&self) -> Option<SqrtQScalar> {
        if self.is_zero() {
            return None;
        }
        let q = self.q.max(1);
        let qq = BigRational::from_integer(BigInt::from(q));
        // Matrix of y -> self*y in the basis 1, r, r^2, r^3 (columns are the
        // images of basis vectors), augmented solve for the column (1,0,0,0).
        let mut m = vec![vec![BigRational::zero(); 5]; 4];
        for j in 0..4 {
            for i in 0..4 {
                // coefficient of r^? in self * r^j: self.c[i] * r^(i+j)
                let k = i + j;
                if k < 4 {
                    m[k][j] = &m[k][j] + &self.c[i];
                } else {
                    m[k - 4][j] = &m[k - 4][j] + &(&self.c[i] * &qq);
                }
            }
        }
        m[0][4] = BigRational::one();
        // Gaussian elimination.
        let mut row = 0;
        for col in 0..4 {
            let Some(p) = (row..4).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let pivot = m[row][col].clone();
            for x in m[row].iter_mut() {
                *x /= &pivot;
            }
            for r in 0..4 {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for cidx in 0..5 {
                        let delta = &f * &m[row][cidx];
                        m[r][cidx] -= delta;
                    }
                }
            }
            row += 1;
            if row == 4 {
                break;
            }
        }
        if row < 4 {
            // Singular multiplication matrix can only happen for zero input
            // in a field; treat as no inverse.
            return None;
        }
        let c = std::array::from_fn(|i| m[i][4].clone());
        let mut out = SqrtQScalar { q: self.q, c };
        out.normalize();
        Some(out)
    }
}

impl fmt::Display for SqrtQScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["", "q^(1/4)", "q^(1/2)", "q^(3/4)"];
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            if names[i].is_empty() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", names[i])?;
            } else {
                write!(f, "({})*{}", c, names[i])?;
            }
            first = false;
        }
        if self.q != 0 {
            write!(f, " [q={}]", self.q)?;
        }
        Ok(())
    }
}

/// Common interface of the exact coefficient rings the algebra modules are
/// generic over: formal fractions of Laurent scalars ([`ScalarFraction`])
/// and fixed-field values ([`SqrtQScalar`]).
///
/// Both rings are fields of characteristic zero containing all powers of
/// `v^(1/2)`.  Fixed-field scalars carry their field size as context;
/// context-free values (plain rationals) are compatible with every context,
/// and [`Scalar::mul_v_half_pow`] panics when asked to produce a `v`-power
/// without any context to interpret it in.
pub trait Scalar: Clone + PartialEq + Eq + std::fmt::Debug + std::fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiply by `v^(half_exp/2)`, interpreted in this scalar's context.
    fn mul_v_half_pow(&self, half_exp: i64) -> Self;
    /// `v^(half_exp/2)` itself, minted in this scalar's context (the value
    /// of `self` is ignored; only its context matters).
    fn v_half_pow_like(&self, half_exp: i64) -> Self;
    fn invert(&self) -> Option<Self>;
    fn from_count(n: &BigInt) -> Self;
}

impl Scalar for ScalarFraction {
    fn zero() -> Self {
        ScalarFraction::zero()
    }
    fn one() -> Self {
        ScalarFraction::one()
    }
    fn is_zero(&self) -> bool {
        ScalarFraction::is_zero(self)
    }
    fn is_one(&self) -> bool {
        ScalarFraction::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        ScalarFraction::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ScalarFraction::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        ScalarFraction::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ScalarFraction::mul(self, rhs)
    }
    fn mul_v_half_pow(&self, half_exp: i64) -> Self {
        ScalarFraction::mul_v_half_pow(self, half_exp)
    }
    fn v_half_pow_like(&self, half_exp: i64) -> Self {
        ScalarFraction::from_laurent(LaurentScalar::v_half_pow(half_exp))
    }
    fn invert(&self) -> Option<Self> {
        ScalarFraction::invert(self)
    }
    fn from_count(n: &BigInt) -> Self {
        ScalarFraction::from_laurent(LaurentScalar::from_bigint(n.clone()))
    }
}

impl Scalar for SqrtQScalar {
    fn zero() -> Self {
        SqrtQScalar::zero()
    }
    fn one() -> Self {
        SqrtQScalar::one()
    }
    fn is_zero(&self) -> bool {
        SqrtQScalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        SqrtQScalar::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        SqrtQScalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        SqrtQScalar::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        SqrtQScalar::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        SqrtQScalar::mul(self, rhs)
    }
    fn mul_v_half_pow(&self, half_exp: i64) -> Self {
        if half_exp == 0 || self.is_zero() {
            return self.clone();
        }
        assert!(
            self.q != 0,
            "cannot apply a v-power to a fixed-field scalar without field context"
        );
        self.mul(&SqrtQScalar::q_quarter_pow(self.q, half_exp))
    }
    fn v_half_pow_like(&self, half_exp: i64) -> Self {
        if half_exp == 0 {
            let mut out = SqrtQScalar::one();
            out.q = self.q;
            return out;
        }
        assert!(
            self.q != 0,
            "cannot mint a v-power from a fixed-field scalar without field context"
        );
        SqrtQScalar::q_quarter_pow(self.q, half_exp)
    }
    fn invert(&self) -> Option<Self> {
        SqrtQScalar::invert(self)
    }
    fn from_count(n: &BigInt) -> Self {
        SqrtQScalar::from_bigint(n)
    }
}

// ---------------------------------------------------------------------------
// q-combinatorics.
// ---------------------------------------------------------------------------

/// Counting quantum integer `(n)_{q^d} = 1 + q^d + ... + q^(d(n-1))`.
pub fn qnum(n: u32, d: u32) -> LaurentScalar {
    let mut out = LaurentScalar::zero();
    for k in 0..n {
        out.insert_add(4 * (d as i64) * k as i64, &BigInt::one());
    }
    out
}

/// Counting factorial `(n)!_{q^d} = (n)(n-1)...(1)` at `q^d`.
pub fn qfact(n: u32, d: u32) -> LaurentScalar {
    let mut out = LaurentScalar::one();
    for k in 1..=n {
        out = &out * &qnum(k, d);
    }
    out
}

/// Counting binomial `binom(n,k)_{q^d} = (n)!/((k)!(n-k)!)`; the division is
/// exact.
pub fn qbinom(n: u32, k: u32, d: u32) -> LaurentScalar {
    if k > n {
        return LaurentScalar::zero();
    }
    let num = qfact(n, d);
    let den = &qfact(k, d) * &qfact(n - k, d);
    num.exact_div(&den).expect("q-binomial division is exact")
}

/// Balanced quantum integer `[n]_{v^d} = v^(d(1-n)) + v^(d(3-n)) + ... +
/// v^(d(n-1))`, invariant under the bar involution.
pub fn bar_qnum(n: u32, d: u32) -> LaurentScalar {
    let mut out = LaurentScalar::zero();
    let n = n as i64;
    let d = d as i64;
    for t in 0..n {
        out.insert_add(2 * d * (2 * t - n + 1), &BigInt::one());
    }
    out
}

/// Balanced factorial `[n]!_{v^d}`.
pub fn bar_qfact(n: u32, d: u32) -> LaurentScalar {
    let mut out = LaurentScalar::one();
    for k in 1..=n {
        out = &out * &bar_qnum(k, d);
    }
    out
}

/// Balanced quantum integer `[n]_{v^d}` minted in the context of `ctx`
/// (see [`Scalar::v_half_pow_like`]); the value of `ctx` is ignored.
pub fn bar_qnum_in<S: Scalar>(ctx: &S, n: u32, d: u32) -> S {
    let mut out = S::zero();
    let (n, d) = (n as i64, d as i64);
    for t in 0..n {
        out = out.add(&ctx.v_half_pow_like(2 * d * (2 * t - n + 1)));
    }
    out
}

/// Balanced factorial `[n]!_{v^d}` minted in the context of `ctx`.
pub fn bar_qfact_in<S: Scalar>(ctx: &S, n: u32, d: u32) -> S {
    let mut out = S::one();
    for k in 1..=n {
        out = out.mul(&bar_qnum_in(ctx, k, d));
    }
    out
}

/// Bar-invariant binomial `[n choose k]_{v^d} = [n]!/([k]![n-k]!)`, equal to
/// `v^(-d*k*(n-k))` times the counting binomial; the division is exact.
pub fn qbinom_bar(n: u32, k: u32, d: u32) -> LaurentScalar {
    if k > n {
        return LaurentScalar::zero();
    }
    let num = bar_qfact(n, d);
    let den = &bar_qfact(k, d) * &bar_qfact(n - k, d);
    num.exact_div(&den).expect("bar q-binomial division is exact")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(e: i64) -> LaurentScalar {
        LaurentScalar::v_half_pow(e)
    }

    /// Independent subspace count: the number of `k`-dimensional subspaces
    /// of `F_p^n`, found by enumerating concrete reduced row-echelon
    /// matrices and checking the echelon conditions entry by entry.
    fn count_subspaces_brute(p: u64, n: usize, k: usize) -> BigInt {
        // Enumerate all pivot column sets, then all fillings of the free
        // entries, and accept exactly the valid RREF matrices.  Every
        // subspace has exactly one RREF basis, so the count is exact.
        fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in pivot_sets(n - first - 1, k - 1) {
                    for x in rest.iter_mut() {
                        *x += first + 1;
                    }
                    let mut s = vec![first];
                    s.extend(rest);
                    out.push(s);
                }
            }
            out
        }
        let mut total = BigInt::zero();
        for pivots in pivot_sets(n, k) {
            // Free entries: row i may have arbitrary values in columns
            // right of pivot i that are not themselves pivot columns.
            let mut free = 0usize;
            for &pc in &pivots {
                for col in (pc + 1)..n {
                    if !pivots.contains(&col) {
                        free += 1;
                    }
                }
            }
            // Count fillings by explicit enumeration (cross-checked against
            // p^free, which is what the enumeration must produce).
            let mut count = 0u64;
            let mut stack = vec![0u64; free];
            loop {
                count += 1;
                let mut idx = free;
                loop {
                    if idx == 0 {
                        break;
                    }
                    idx -= 1;
                    stack[idx] += 1;
                    if stack[idx] < p {
                        break;
                    }
                    stack[idx] = 0;
                }
                if stack.iter().all(|&x| x == 0) {
                    break;
                }
                if free == 0 {
                    break;
                }
            }
            total += BigInt::from(count);
        }
        total
    }

    /// Lagrange interpolation through integer points, asserting an integer
    /// polynomial; independent of the library's interpolation code.
    fn interpolate_integer_poly(points: &[(u64, BigInt)]) -> Vec<BigInt> {
        let n = points.len();
        let mut acc = vec![BigRational::zero(); n];
        for (i, (xi, yi)) in points.iter().enumerate() {
            // Basis polynomial prod_{j != i} (x - xj) / (xi - xj).
            let mut poly = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let xj = BigRational::from_integer(BigInt::from(*xj));
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (t, c) in poly.iter().enumerate() {
                    next[t + 1] = &next[t + 1] + c;
                    next[t] = &next[t] - &(c * &xj);
                }
                poly = next;
                denom *= BigRational::from_integer(BigInt::from(*xi)) - xj;
            }
            let scale = BigRational::from_integer(yi.clone()) / denom;
            for (t, c) in poly.iter().enumerate() {
                acc[t] = &acc[t] + &(c * &scale);
            }
        }
        acc.iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolation produced a non-integer coefficient");
                c.to_integer()
            })
            .collect()
    }

    #[test]
    fn gaussian_binomial_matches_brute_force_subspace_counts() {
        // Counting 2-dimensional subspaces of F_p^4 at five primes pins the
        // degree-4 polynomial; it must agree with qbinom(4,2,1).
        let primes = [2u64, 3, 5, 7, 11];
        let pts: Vec<(u64, BigInt)> =
            primes.iter().map(|&p| (p, count_subspaces_brute(p, 4, 2))).collect();
        let poly = interpolate_integer_poly(&pts);
        assert_eq!(LaurentScalar::from_q_poly(&poly), qbinom(4, 2, 1));
        // Frozen expected value: 1 + q + 2q^2 + q^3 + q^4.
        let expected = LaurentScalar::from_q_poly(&[
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(2),
            BigInt::from(1),
            BigInt::from(1),
        ]);
        assert_eq!(qbinom(4, 2, 1), expected);
    }

    #[test]
    fn gaussian_binomial_small_values() {
        assert_eq!(qbinom(0, 0, 1), LaurentScalar::one());
        assert_eq!(qbinom(3, 1, 1), qnum(3, 1));
        assert_eq!(qbinom(3, 1, 2), qnum(3, 2));
        assert_eq!(qbinom(2, 1, 1), &LaurentScalar::one() + &v(4));
        // Symmetry binom(n,k) = binom(n,n-k).
        for n in 0..=8u32 {
            for k in 0..=n {
                assert_eq!(qbinom(n, k, 1), qbinom(n, n - k, 1));
                assert_eq!(qbinom(n, k, 3), qbinom(n, n - k, 3));
            }
        }
    }

    #[test]
    fn balanced_binomial_is_power_shift_of_counting_binomial() {
        for d in 1..=3u32 {
            for n in 0..=8u32 {
                for k in 0..=n {
                    let shift = -4 * (d as i64) * (k as i64) * ((n - k) as i64) / 2;
                    // v^(-d k (n-k)) in half-exponent units is -2dk(n-k).
                    let lhs = qbinom_bar(n, k, d);
                    let rhs =
                        qbinom(n, k, d).mul_v_half_pow(-2 * (d as i64) * (k as i64 * (n - k) as i64));
                    assert_eq!(lhs, rhs, "n={} k={} d={} (shift {})", n, k, d, shift);
                }
            }
        }
    }

    #[test]
    fn balanced_binomial_is_bar_invariant() {
        for d in 1..=3u32 {
            for n in 0..=7u32 {
                for k in 0..=n {
                    let b = qbinom_bar(n, k, d);
                    assert_eq!(b.bar(), b);
                }
            }
        }
        assert_eq!(qbinom_bar(2, 1, 1), &v(-2) + &v(2));
    }

    #[test]
    fn pascal_identities() {
        // binom(n,k) = binom(n-1,k-1) + q^k binom(n-1,k)
        //            = q^(n-k) binom(n-1,k-1) + binom(n-1,k).
        for d in 1..=3u32 {
            for n in 2..=8u32 {
                for k in 1..n {
                    let b = qbinom(n, k, d);
                    let qk = v(4 * d as i64 * k as i64);
                    let qnk = v(4 * d as i64 * (n - k) as i64);
                    let first = &qbinom(n - 1, k - 1, d) + &(&qk * &qbinom(n - 1, k, d));
                    let second = &(&qnk * &qbinom(n - 1, k - 1, d)) + &qbinom(n - 1, k, d);
                    assert_eq!(b, first, "first Pascal n={} k={} d={}", n, k, d);
                    assert_eq!(b, second, "second Pascal n={} k={} d={}", n, k, d);
                }
            }
        }
    }

    #[test]
    fn alternating_row_identity() {
        // sum_k (-1)^k q^(-nk + k(k+1)/2) binom(n,k) = 0 for n >= 1.
        for d in 1..=3u32 {
            for n in 1..=8u32 {
                let mut total = LaurentScalar::zero();
                for k in 0..=n {
                    let e = -(n as i64) * k as i64 + (k as i64) * (k as i64 + 1) / 2;
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let term = &qbinom(n, k, d)
                        .mul_v_half_pow(4 * d as i64 * e)
                        * &LaurentScalar::from_int(sign);
                    total = &total + &term;
                }
                assert!(total.is_zero(), "row identity fails n={} d={}: {}", n, d, total);
            }
        }
    }

    #[test]
    fn subspace_decomposition_identity() {
        // binom(m+n,k) = sum_{r+s=k} q^(r(n-s)) binom(m,r) binom(n,s).
        for d in 1..=2u32 {
            for m in 0..=4u32 {
                for n in 0..=4u32 {
                    for k in 0..=(m + n) {
                        let mut rhs = LaurentScalar::zero();
                        for r in 0..=k.min(m) {
                            let s = k - r;
                            if s > n {
                                continue;
                            }
                            let e = 4 * d as i64 * (r as i64) * (n as i64 - s as i64);
                            let term = (&qbinom(m, r, d) * &qbinom(n, s, d)).mul_v_half_pow(e);
                            rhs = &rhs + &term;
                        }
                        assert_eq!(qbinom(m + n, k, d), rhs, "m={} n={} k={} d={}", m, n, k, d);
                    }
                }
            }
        }
    }

    #[test]
    fn exact_division_basic() {
        // (q^2 - 1) / (q - 1) = q + 1.
        let q2m1 = &v(8) - &LaurentScalar::one();
        let qm1 = &v(4) - &LaurentScalar::one();
        let quot = q2m1.exact_div(&qm1).unwrap();
        assert_eq!(quot, &v(4) + &LaurentScalar::one());
        // Non-exact division returns None.
        assert!(qm1.exact_div(&q2m1).is_none());
        let three = LaurentScalar::from_int(3);
        let two = LaurentScalar::from_int(2);
        assert!(three.exact_div(&two).is_none());
    }

    #[test]
    fn fraction_reduction_is_canonical_and_idempotent() {
        // (q^2-1) / (v(q-1)) reduces to (q+1)/v = v^(-2)*(q+1) over den 1.
        let num = &v(8) - &LaurentScalar::one();
        let den = &v(2) * &(&v(4) - &LaurentScalar::one());
        let f = ScalarFraction::new(num, den);
        assert!(f.as_laurent().is_some());
        assert_eq!(*f.as_laurent().unwrap(), (&v(4) + &LaurentScalar::one()).mul_v_half_pow(-2));
        // 1/[2] keeps an honest denominator with positive low coefficient.
        let g = ScalarFraction::new(LaurentScalar::one(), bar_qnum(2, 1));
        assert!(g.as_laurent().is_none());
        assert_eq!(*g.denominator(), &LaurentScalar::one() + &v(4));
        let again = ScalarFraction::new(g.numerator().clone(), g.denominator().clone());
        assert_eq!(g, again);
    }

    #[test]
    fn fraction_field_axioms_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0ef);
        let random_laurent = |rng: &mut ChaCha8Rng| {
            let mut x = LaurentScalar::zero();
            for _ in 0..rng.gen_range(1..4) {
                let e = rng.gen_range(-6..7);
                let c = rng.gen_range(-4..5);
                x = &x + &LaurentScalar::monomial(e, BigInt::from(c));
            }
            x
        };
        for _ in 0..200 {
            let a = random_laurent(&mut rng);
            let b = random_laurent(&mut rng);
            let c = random_laurent(&mut rng);
            if b.is_zero() || c.is_zero() {
                continue;
            }
            let f = ScalarFraction::new(a.clone(), b.clone());
            let g = ScalarFraction::new(c.clone(), b.clone());
            // (a/b) + (c/b) = (a+c)/b.
            assert_eq!(f.add(&g), ScalarFraction::new(&a + &c, b.clone()));
            // (a/b) * (b/c) = a/c.
            let h = ScalarFraction::new(b.clone(), c.clone());
            assert_eq!(f.mul(&h), ScalarFraction::new(a.clone(), c.clone()));
            if !f.is_zero() {
                assert!(f.mul(&f.invert().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn bar_involution_properties() {
        let x = &(&v(3) * &LaurentScalar::from_int(2)) + &v(-5);
        assert_eq!(x.bar().bar(), x);
        let f = ScalarFraction::new(x.clone(), bar_qnum(3, 2));
        assert_eq!(f.bar().bar(), f);
        for n in 0..=6u32 {
            assert_eq!(bar_qnum(n, 1).bar(), bar_qnum(n, 1));
        }
    }

    #[test]
    fn specialization_examples() {
        // v^2 at q=4 is 4.
        assert_eq!(v(4).specialize(4), SqrtQScalar::from_int(4));
        // 1 + v^2 at q=2 is 3.
        assert_eq!((&LaurentScalar::one() + &v(4)).specialize(2), SqrtQScalar::from_int(3));
        // v at q=9 is 3 (perfect square: folded into the rational part).
        let sp = v(2).specialize(9);
        assert_eq!(*sp.rational_part(), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(sp.sqrt_part().unwrap(), BigRational::zero());
        // v at q=2 is sqrt(2): pure sqrt part.
        let s2 = v(2).specialize(2);
        assert_eq!(*s2.rational_part(), BigRational::zero());
        assert_eq!(s2.sqrt_part().unwrap(), BigRational::one());
        // v^(1/2) at q=2 is a genuine fourth root: no sqrt-form available.
        let quarter = v(1).specialize(2);
        assert!(quarter.sqrt_part().is_none());
        assert_eq!(quarter, SqrtQScalar::q_quarter_pow(2, 1));
    }

    #[test]
    fn sqrt_q_ring_axioms() {
        // Fourth-root arithmetic closes: r * r^3 = q at q = 2.
        let r = SqrtQScalar::q_quarter_pow(2, 1);
        let r3 = SqrtQScalar::q_quarter_pow(2, 3);
        assert_eq!(r.mul(&r3), SqrtQScalar::from_int(2));
        // Negative powers invert exactly.
        let rm1 = SqrtQScalar::q_quarter_pow(2, -1);
        assert!(r.mul(&rm1).is_one());
        assert_eq!(r.invert().unwrap(), rm1);
        // Mixed element inverse round-trips.
        let x = SqrtQScalar::q_quarter_pow(3, 2)
            .add(&SqrtQScalar::from_int(5))
            .add(&SqrtQScalar::q_quarter_pow(3, 1).scale_int(&BigInt::from(-2)));
        let inv = x.invert().unwrap();
        assert!(x.mul(&inv).is_one());
        // Specialization is a ring homomorphism on random Laurent scalars.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let mut a = LaurentScalar::zero();
            let mut b = LaurentScalar::zero();
            for _ in 0..3 {
                a = &a + &LaurentScalar::monomial(rng.gen_range(-5..6), BigInt::from(rng.gen_range(-3..4)));
                b = &b + &LaurentScalar::monomial(rng.gen_range(-5..6), BigInt::from(rng.gen_range(-3..4)));
            }
            for q in [2u64, 3, 4, 5, 8, 9] {
                assert_eq!((&a * &b).specialize(q), a.specialize(q).mul(&b.specialize(q)));
                assert_eq!((&a + &b).specialize(q), a.specialize(q).add(&b.specialize(q)));
            }
        }
    }

    #[test]
    fn counting_quantum_integers_evaluate_to_counts() {
        // (n)_q at q = p counts points of P^(n-1)(F_p).
        for p in [2u64, 3, 5] {
            for n in 1..=5u32 {
                let expected: u64 = (0..n).map(|k| p.pow(k)).sum();
                assert_eq!(qnum(n, 1).specialize(p), SqrtQScalar::from_int(expected as i64));
            }
        }
        // Subscript d rescales q -> q^d.
        assert_eq!(qnum(2, 3), &LaurentScalar::one() + &v(12));
    }
}
