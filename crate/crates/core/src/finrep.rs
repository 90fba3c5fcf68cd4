//! Finite fields and representations of valued quivers over them.
//!
//! A representation of a valued quiver over the field with `q` elements
//! assigns to each vertex `i` a vector space over the extension of degree
//! `d_i`, and to each arrow `i -> j` a linear map over the extension of
//! degree `gcd(d_i, d_j)` between the restricted-scalar spaces.  This
//! module provides:
//!
//! * deterministic finite fields `F_(p^k)` with exact table arithmetic and
//!   a [`FieldTower`] of compatible extensions over a base prime power;
//! * dense matrices and row reduction over those fields;
//! * [`QuiverRep`] construction, direct sums, sub- and quotient
//!   representations, and exact counting of subrepresentations, flags of a
//!   given type, and extension (Hall) numbers;
//! * homomorphism-space dimensions, automorphism-group orders via orbit
//!   enumeration, isomorphism classes ([`RepClass`]), and rigidity tests;
//! * exact Lagrange interpolation of counting functions of `q` into
//!   integer [`CountingPolynomial`]s with held-out verification.
//!
//! Everything is brute-force and exact, sized for small dimension vectors
//! (total base-field dimension about 6) and small prime powers.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use rayon::prelude::*;

use crate::cartan::{unit_vector, DimVector, ValuedQuiver};

/// Largest permitted field size for table construction.
const MAX_FIELD_SIZE: u64 = 1 << 16;

// ---------------------------------------------------------------------------
// Primes and prime powers.
// ---------------------------------------------------------------------------

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut t = 2;
    while t * t <= n {
        if n % t == 0 {
            return false;
        }
        t += 1;
    }
    true
}

/// Decompose `n = p^k` with `p` prime, if possible.
pub fn prime_power_decompose(n: u64) -> Option<(u64, usize)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}

/// The prime powers `2, 3, 4, 5, 7, 8, 9, 11, 13, 16, ...` in increasing
/// order.
pub fn prime_powers() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| prime_power_decompose(n).is_some())
}

// ---------------------------------------------------------------------------
// Polynomial helpers over F_p (construction-time only).
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u64, mut a: Vec<u64>, m: &[u64]) -> Vec<u64> {
    let deg_m = m.len() - 1;
    while a.len() > deg_m {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - deg_m;
        if lead != 0 {
            for (t, &c) in m.iter().enumerate() {
                let idx = shift + t;
                a[idx] = (a[idx] + (p - 1) * lead * c) % p;
            }
        }
        a.pop();
        poly_trim(&mut a);
    }
    a
}

// ---------------------------------------------------------------------------
// Finite fields.
// ---------------------------------------------------------------------------

/// The field with `p^k` elements, `F_p[x]` modulo the lexicographically
/// smallest monic irreducible polynomial of degree `k`.
///
/// Elements are integers `0..p^k` encoding coefficient vectors in base `p`
/// (digit `t` is the coefficient of `x^t`); constants `0..p` embed as
/// themselves.  Multiplication runs through discrete-log tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteField {
    p: u64,
    k: usize,
    size: u64,
    modulus: Vec<u64>,
    exp: Vec<u64>,
    log: Vec<u64>,
}

impl FiniteField {
    pub fn new(p: u64, k: usize) -> Result<Self, String> {
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        if k == 0 {
            return Err("extension degree must be positive".into());
        }
        let size = p
            .checked_pow(k as u32)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or_else(|| format!("field size {p}^{k} exceeds the table limit"))?;
        let modulus = Self::smallest_irreducible(p, k);
        let mut field = FiniteField {
            p,
            k,
            size,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_log_tables();
        Ok(field)
    }

    /// The lexicographically smallest monic irreducible of degree `k`,
    /// scanning the non-leading coefficient vector as a base-`p` counter.
    fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
        'candidates: for m in 0..p.pow(k as u32) {
            let mut f = Vec::with_capacity(k + 1);
            let mut rest = m;
            for _ in 0..k {
                f.push(rest % p);
                rest /= p;
            }
            f.push(1);
            // Trial division by every monic polynomial of degree <= k/2.
            for t in 1..=(k / 2) {
                for dm in 0..p.pow(t as u32) {
                    let mut div = Vec::with_capacity(t + 1);
                    let mut rest = dm;
                    for _ in 0..t {
                        div.push(rest % p);
                        rest /= p;
                    }
                    div.push(1);
                    if poly_rem(p, f.clone(), &div).is_empty() {
                        continue 'candidates;
                    }
                }
            }
            // Degree-1 candidates are always irreducible; higher degrees
            // reach here only after surviving trial division.
            return f;
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    fn decode(&self, mut a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut out = 0;
        for &d in digits.iter().rev() {
            out = out * self.p + d;
        }
        out
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let prod = poly_mul(self.p, &self.decode(a), &self.decode(b));
        let rem = poly_rem(self.p, prod, &self.modulus);
        let mut digits = rem;
        digits.resize(self.k, 0);
        self.encode(&digits)
    }

    fn build_log_tables(&mut self) {
        let n = self.size - 1;
        let mut generator = 0;
        for g in 1..self.size {
            let mut a = g;
            let mut order = 1u64;
            while a != 1 {
                a = self.slow_mul(a, g);
                order += 1;
            }
            if order == n {
                generator = g;
                break;
            }
        }
        assert!(generator != 0, "every finite field has a primitive element");
        let mut exp = vec![0u64; n as usize];
        let mut log = vec![0u64; self.size as usize];
        let mut a = 1;
        for t in 0..n {
            exp[t as usize] = a;
            log[a as usize] = t;
            a = self.slow_mul(a, generator);
        }
        assert_eq!(a, 1, "the generator order must divide the table length");
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Coefficients `c_0..c_k` of the modulus (monic, `c_k = 1`).
    pub fn modulus_coeffs(&self) -> &[u64] {
        &self.modulus
    }

    /// The residue class of `x`, generating the power basis over `F_p`.
    pub fn gen_x(&self) -> u64 {
        if self.k == 1 {
            // x reduces to -c_0 modulo the degree-one modulus.
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    /// A fixed primitive element (generator of the unit group).
    pub fn primitive_element(&self) -> u64 {
        self.exp.get(1).copied().unwrap_or(1)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a + b) % self.p) * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            let d = a % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            place *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            0
        } else {
            let n = self.size - 1;
            self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "zero has no inverse");
        let n = self.size - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.size - 1;
        self.exp[((self.log[a as usize] * (e % n)) % n) as usize]
    }

    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.p)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.size)
    }
}

// ---------------------------------------------------------------------------
// Towers of extensions over a base prime power.
// ---------------------------------------------------------------------------

fn gcd_usize(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The fields `F_(q^d)` for the degrees `d` needed by one quiver over one
/// base prime power `q`, with deterministic subfield embeddings and
/// power-basis coordinate tables for restriction of scalars.
pub struct FieldTower {
    q: u64,
    p: u64,
    s: usize,
    fields: BTreeMap<usize, FiniteField>,
    /// `(a, b)` with `a | b`: lex-smallest root of `F_(q^a)`'s modulus in
    /// `F_(q^b)`, the image of its power-basis generator.
    roots: BTreeMap<(usize, usize), u64>,
    /// `(d, g)` with `g | d`: flat table of power-basis coordinates over
    /// `F_(q^g)` of every element of `F_(q^d)` (stride `d/g`).
    coord_tables: BTreeMap<(usize, usize), Vec<u64>>,
}

impl FieldTower {
    /// Build the tower over `F_q` with the given extension degrees
    /// (degree 1 is always included, as are all pairwise gcds).
    pub fn new(q: u64, degrees: &[usize]) -> Result<Self, String> {
        let (p, s) =
            prime_power_decompose(q).ok_or_else(|| format!("{q} is not a prime power"))?;
        let mut degs: Vec<usize> = vec![1];
        degs.extend_from_slice(degrees);
        for i in 0..degrees.len() {
            for j in 0..i {
                degs.push(gcd_usize(degrees[i], degrees[j]));
            }
        }
        degs.sort_unstable();
        degs.dedup();
        if degs.iter().any(|&d| d == 0) {
            return Err("extension degree must be positive".into());
        }
        let mut fields = BTreeMap::new();
        for &d in &degs {
            fields.insert(d, FiniteField::new(p, s * d)?);
        }
        let mut tower = FieldTower {
            q,
            p,
            s,
            fields,
            roots: BTreeMap::new(),
            coord_tables: BTreeMap::new(),
        };
        for &a in &degs {
            for &b in &degs {
                if b % a == 0 {
                    tower.install_pair(a, b);
                }
            }
        }
        Ok(tower)
    }

    /// Tower with exactly the degrees a quiver's representations use.
    pub fn for_quiver(quiver: &ValuedQuiver, q: u64) -> Result<Self, String> {
        let degrees: Vec<usize> = quiver.weights().iter().map(|&d| d as usize).collect();
        FieldTower::new(q, &degrees)
    }

    fn install_pair(&mut self, a: usize, b: usize) {
        // Root of the small modulus in the big field.
        let fa_modulus = self.fields[&a].modulus.clone();
        let fb = &self.fields[&b];
        let mut root = None;
        for z in 0..fb.size() {
            let mut acc = 0;
            for &c in fa_modulus.iter().rev() {
                acc = fb.add(fb.mul(acc, z), c % self.p);
            }
            if acc == 0 {
                root = Some(z);
                break;
            }
        }
        let root = root.expect("the small modulus splits in the big field");
        self.roots.insert((a, b), root);

        // Coordinate table for the pair (d, g) = (b, a).
        let dim = b / a;
        let fg_size = self.fields[&a].size();
        let y = fb.gen_x();
        let y_pows: Vec<u64> = (0..dim).map(|t| fb.pow(y, t as u64)).collect();
        let mut table = vec![u64::MAX; (fb.size() as usize) * dim];
        let mut tuple = vec![0u64; dim];
        loop {
            let mut val = 0;
            for t in 0..dim {
                val = fb.add(val, fb.mul(self.embed_with(a, b, root, tuple[t]), y_pows[t]));
            }
            let base = (val as usize) * dim;
            debug_assert!(
                table[base] == u64::MAX,
                "power-basis tuples must hit distinct elements"
            );
            table[base..base + dim].copy_from_slice(&tuple);
            // Odometer step.
            let mut t = 0;
            loop {
                if t == dim {
                    self.coord_tables.insert((b, a), table);
                    return;
                }
                tuple[t] += 1;
                if tuple[t] < fg_size {
                    break;
                }
                tuple[t] = 0;
                t += 1;
            }
        }
    }

    fn embed_with(&self, a: usize, b: usize, root: u64, elt: u64) -> u64 {
        if a == b {
            return elt;
        }
        let fb = &self.fields[&b];
        let digits = self.fields[&a].decode(elt);
        let mut acc = 0;
        for &c in digits.iter().rev() {
            acc = fb.add(fb.mul(acc, root), c);
        }
        acc
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn base_degree(&self) -> usize {
        self.s
    }

    /// The field `F_(q^d)`.
    pub fn field(&self, d: usize) -> &FiniteField {
        self.fields
            .get(&d)
            .unwrap_or_else(|| panic!("degree {d} is not part of this tower"))
    }

    pub fn base(&self) -> &FiniteField {
        self.field(1)
    }

    /// Image of `elt` under the fixed embedding `F_(q^a) -> F_(q^b)`.
    pub fn embed(&self, a: usize, b: usize, elt: u64) -> u64 {
        if a == b {
            return elt;
        }
        let root = *self
            .roots
            .get(&(a, b))
            .unwrap_or_else(|| panic!("no embedding for degree pair ({a}, {b})"));
        self.embed_with(a, b, root, elt)
    }

    /// Power-basis coordinates of `elt` in `F_(q^d)` over `F_(q^g)`:
    /// `elt = sum_t embed(coords[t]) * y^t` with `y` the power-basis
    /// generator of `F_(q^d)`.
    pub fn coords(&self, d: usize, g: usize, elt: u64) -> &[u64] {
        let dim = d / g;
        let table = self
            .coord_tables
            .get(&(d, g))
            .unwrap_or_else(|| panic!("no coordinate table for degree pair ({d}, {g})"));
        let base = (elt as usize) * dim;
        &table[base..base + dim]
    }

    /// Inverse of [`FieldTower::coords`].
    pub fn assemble(&self, d: usize, g: usize, co: &[u64]) -> u64 {
        let fd = self.field(d);
        let y = fd.gen_x();
        let mut out = 0;
        for (t, &c) in co.iter().enumerate() {
            out = fd.add(out, fd.mul(self.embed(g, d, c), fd.pow(y, t as u64)));
        }
        out
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degs: Vec<String> = self.fields.keys().map(|d| d.to_string()).collect();
        write!(f, "tower over F_{} with degrees {}", self.q, degs.join(","))
    }
}

// ---------------------------------------------------------------------------
// Matrices over a finite field.
// ---------------------------------------------------------------------------

/// Dense row-major matrix with entries in a fixed finite field (the field
/// is passed to every operation).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, val: u64) {
        self.data[r * self.cols + c] = val;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn mul(&self, f: &FiniteField, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let add = f.mul(a, rhs.get(t, c));
                    out.set(r, c, f.add(out.get(r, c), add));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FiniteField, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0;
                for c in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, c), v[c]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self, f: &FiniteField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    let (a, b) = (self.get(row, c), self.get(pr, c));
                    self.set(row, c, b);
                    self.set(pr, c, a);
                }
            }
            let inv = f.inv(self.get(row, col));
            for c in 0..self.cols {
                self.set(row, c, f.mul(self.get(row, c), inv));
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for c in 0..self.cols {
                        let sub = f.mul(factor, self.get(row, c));
                        self.set(r, c, f.sub(self.get(r, c), sub));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FiniteField) -> usize {
        let mut m = self.clone();
        m.rref_in_place(f).len()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduce `v` against the rows of an RREF matrix; afterwards `v` is the
/// canonical coset representative (zero iff `v` was in the row space).
pub fn reduce_vector(f: &FiniteField, rref: &Matrix, pivots: &[usize], v: &mut [u64]) {
    assert_eq!(rref.cols(), v.len());
    for (r, &pc) in pivots.iter().enumerate() {
        let factor = v[pc];
        if factor != 0 {
            for c in 0..v.len() {
                v[c] = f.sub(v[c], f.mul(factor, rref.get(r, c)));
            }
        }
    }
}

/// Solve `A X = B` when `A` has full column rank; `None` if inconsistent.
fn solve_full_rank(f: &FiniteField, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows());
    let (n, k) = (a.cols(), b.cols());
    let mut aug = Matrix::zero(a.rows(), n + k);
    for r in 0..a.rows() {
        for c in 0..n {
            aug.set(r, c, a.get(r, c));
        }
        for c in 0..k {
            aug.set(r, n + c, b.get(r, c));
        }
    }
    let pivots = aug.rref_in_place(f);
    if pivots.iter().any(|&p| p >= n) {
        return None; // A pivot in the right block means no solution.
    }
    if pivots.len() != n {
        return None; // Not full column rank: the solution would not be unique.
    }
    let mut x = Matrix::zero(n, k);
    for (r, &pc) in pivots.iter().enumerate() {
        for c in 0..k {
            x.set(pc, c, aug.get(r, n + c));
        }
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Subspace enumeration.
// ---------------------------------------------------------------------------

/// All `k`-dimensional subspaces of `F^n`, each as its unique `k x n`
/// reduced-row-echelon basis matrix, pivot columns in lexicographic order.
pub fn subspaces(f: &FiniteField, n: usize, k: usize) -> Vec<Matrix> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Matrix::zero(0, n)];
    }
    let mut out = Vec::new();
    // Pivot-column combinations in lexicographic order.
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free cells: (row r, column c) with c > pivots[r] and c not a pivot.
        let mut free = Vec::new();
        for r in 0..k {
            for c in (pivots[r] + 1)..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut vals = vec![0u64; free.len()];
        loop {
            let mut m = Matrix::zero(k, n);
            for r in 0..k {
                m.set(r, pivots[r], 1);
            }
            for (idx, &(r, c)) in free.iter().enumerate() {
                m.set(r, c, vals[idx]);
            }
            out.push(m);
            // Odometer over free-cell values.
            let mut t = 0;
            loop {
                if t == vals.len() {
                    break;
                }
                vals[t] += 1;
                if vals[t] < f.size() {
                    break;
                }
                vals[t] = 0;
                t += 1;
            }
            if vals.iter().all(|&v| v == 0) {
                break;
            }
        }
        // Next pivot combination.
        let mut r = k;
        loop {
            if r == 0 {
                return out;
            }
            r -= 1;
            if pivots[r] < n - (k - r) {
                pivots[r] += 1;
                for t in (r + 1)..k {
                    pivots[t] = pivots[t - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Quiver representations.
// ---------------------------------------------------------------------------

/// A representation of a valued quiver over the field with `q` elements:
/// dimension `v_i` over `F_(q^(d_i))` at vertex `i`, and for each arrow
/// `i -> j` (with `g = gcd(d_i, d_j)`) a matrix over `F_(q^g)` of shape
/// `(v_j d_j/g) x (v_i d_i/g)` acting on restricted-scalar coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuiverRep {
    quiver: ValuedQuiver,
    q: u64,
    dims: DimVector,
    arrow_maps: Vec<Matrix>,
}

/// Shape of the arrow matrix for `i -> j` at dimension vector `dims`.
fn arrow_shape(quiver: &ValuedQuiver, dims: &[i64], i: usize, j: usize) -> (usize, usize, usize) {
    let (di, dj) = (quiver.weight(i) as usize, quiver.weight(j) as usize);
    let g = gcd_usize(di, dj);
    let rows = (dims[j] as usize) * (dj / g);
    let cols = (dims[i] as usize) * (di / g);
    (rows, cols, g)
}

impl QuiverRep {
    pub fn new(
        quiver: ValuedQuiver,
        q: u64,
        dims: DimVector,
        arrow_maps: Vec<Matrix>,
    ) -> Result<Self, String> {
        if dims.len() != quiver.rank() {
            return Err("dimension vector length differs from the quiver rank".into());
        }
        if dims.iter().any(|&v| v < 0) {
            return Err("dimension vector entries must be nonnegative".into());
        }
        let arrows = quiver.arrow_instances();
        if arrow_maps.len() != arrows.len() {
            return Err(format!(
                "{} arrow maps supplied for {} arrows",
                arrow_maps.len(),
                arrows.len()
            ));
        }
        for (idx, &(i, j)) in arrows.iter().enumerate() {
            let (rows, cols, g) = arrow_shape(&quiver, &dims, i, j);
            let m = &arrow_maps[idx];
            if m.rows() != rows || m.cols() != cols {
                return Err(format!(
                    "arrow {idx} ({i} -> {j}) has shape {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                ));
            }
            let gsize = q.pow(g as u32);
            if m.data().iter().any(|&e| e >= gsize) {
                return Err(format!(
                    "arrow {idx} has an entry outside the field of size {gsize}"
                ));
            }
        }
        Ok(QuiverRep {
            quiver,
            q,
            dims,
            arrow_maps,
        })
    }

    /// The zero representation.
    pub fn zero_rep(quiver: ValuedQuiver, q: u64) -> Self {
        let dims = vec![0; quiver.rank()];
        Self::semisimple(quiver, q, &dims)
    }

    /// The simple representation at one vertex.
    pub fn simple(quiver: ValuedQuiver, q: u64, vertex: usize) -> Self {
        let dims = unit_vector(quiver.rank(), vertex);
        Self::semisimple(quiver, q, &dims)
    }

    /// Direct sum of simples with the given multiplicities (all arrow maps
    /// zero).
    pub fn semisimple(quiver: ValuedQuiver, q: u64, dims: &[i64]) -> Self {
        let arrows = quiver.arrow_instances();
        let maps = arrows
            .iter()
            .map(|&(i, j)| {
                let (rows, cols, _) = arrow_shape(&quiver, dims, i, j);
                Matrix::zero(rows, cols)
            })
            .collect();
        QuiverRep::new(quiver, q, dims.to_vec(), maps)
            .expect("zero maps always have the right shape")
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    /// Total dimension over the base field: `sum_i d_i v_i`.
    pub fn total_dim(&self) -> i64 {
        self.dims
            .iter()
            .zip(self.quiver.weights())
            .map(|(&v, &d)| v * d)
            .sum()
    }

    pub fn arrow_map(&self, idx: usize) -> &Matrix {
        &self.arrow_maps[idx]
    }

    /// Block-diagonal direct sum.  Coordinates of the summands stay in
    /// order, so restricted-scalar coordinates are block-diagonal too.
    pub fn direct_sum(&self, other: &QuiverRep) -> QuiverRep {
        assert_eq!(self.quiver, other.quiver, "direct sum across quivers");
        assert_eq!(self.q, other.q, "direct sum across base fields");
        let dims: DimVector = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let arrows = self.quiver.arrow_instances();
        let maps = arrows
            .iter()
            .enumerate()
            .map(|(idx, _)| {
                let (a, b) = (&self.arrow_maps[idx], &other.arrow_maps[idx]);
                let mut m = Matrix::zero(a.rows() + b.rows(), a.cols() + b.cols());
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        QuiverRep::new(self.quiver.clone(), self.q, dims, maps)
            .expect("block sums always have the right shape")
    }

    fn flat(&self) -> Vec<u64> {
        self.arrow_maps
            .iter()
            .flat_map(|m| m.data().iter().copied())
            .collect()
    }
}

impl fmt::Display for QuiverRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rep of dim {:?} over F_{}", self.dims, self.q)
    }
}

// ---------------------------------------------------------------------------
// Restriction of scalars.
// ---------------------------------------------------------------------------

/// Restricted-scalar coordinates of a vector over `F_(q^d)`: each entry
/// expands into its `d/g` power-basis coordinates over `F_(q^g)`, blocks
/// in entry order.
fn res_vector(tower: &FieldTower, d: usize, g: usize, v: &[u64]) -> Vec<u64> {
    let dim = d / g;
    let mut out = Vec::with_capacity(v.len() * dim);
    for &z in v {
        out.extend_from_slice(tower.coords(d, g, z));
    }
    out
}

/// Inverse of [`res_vector`].
fn unres_vector(tower: &FieldTower, d: usize, g: usize, v: &[u64]) -> Vec<u64> {
    let dim = d / g;
    v.chunks(dim)
        .map(|chunk| tower.assemble(d, g, chunk))
        .collect()
}

/// Restriction of scalars of a basis: rows `(r, t)` are the coordinates of
/// `y^t * (row r)`, giving an `F_(q^g)`-basis of the restricted span.
fn res_basis(tower: &FieldTower, d: usize, g: usize, basis: &Matrix) -> Matrix {
    let fd = tower.field(d);
    let dim = d / g;
    let y = fd.gen_x();
    let mut rows = Vec::with_capacity(basis.rows() * dim);
    for r in 0..basis.rows() {
        let mut scaled: Vec<u64> = basis.row(r).to_vec();
        for _ in 0..dim {
            rows.push(res_vector(tower, d, g, &scaled));
            for entry in scaled.iter_mut() {
                *entry = fd.mul(*entry, y);
            }
        }
    }
    let mut m = Matrix::from_rows(rows);
    if basis.rows() == 0 {
        m = Matrix::zero(0, basis.cols() * dim);
    }
    m
}

/// Restriction of scalars of a matrix over `F_(q^d)` to a block matrix
/// over `F_(q^g)`: block `(R, C)` is multiplication by the entry `(R, C)`
/// in the power basis.
fn res_matrix(tower: &FieldTower, d: usize, g: usize, m: &Matrix) -> Matrix {
    let fd = tower.field(d);
    let dim = d / g;
    let y = fd.gen_x();
    let mut out = Matrix::zero(m.rows() * dim, m.cols() * dim);
    for bigr in 0..m.rows() {
        for bigc in 0..m.cols() {
            let z = m.get(bigr, bigc);
            if z == 0 {
                continue;
            }
            for t in 0..dim {
                let val = fd.mul(z, fd.pow(y, t as u64));
                let co = tower.coords(d, g, val);
                for (tp, &c) in co.iter().enumerate() {
                    out.set(bigr * dim + tp, bigc * dim + t, c);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Subrepresentation enumeration.
// ---------------------------------------------------------------------------

/// Precomputed per-vertex candidate subspaces plus restriction data for
/// closure testing against the arrows.
struct SubrepSearch<'a> {
    tower: &'a FieldTower,
    rep: &'a QuiverRep,
    /// Per vertex: RREF bases of candidate subspaces over `F_(q^(d_i))`.
    cands: Vec<Vec<Matrix>>,
    /// Per arrow, per source candidate: arrow images of the restricted
    /// basis vectors.
    images: Vec<Vec<Vec<Vec<u64>>>>,
    /// Per arrow, per target candidate: RREF of the restricted span with
    /// its pivots, for membership tests.
    targets: Vec<Vec<(Matrix, Vec<usize>)>>,
}

impl<'a> SubrepSearch<'a> {
    fn new(tower: &'a FieldTower, rep: &'a QuiverRep, e: &[i64]) -> Option<Self> {
        let quiver = rep.quiver();
        let n = quiver.rank();
        assert_eq!(e.len(), n, "target dimension vector length mismatch");
        if (0..n).any(|i| e[i] < 0 || e[i] > rep.dims[i]) {
            return None;
        }
        let cands: Vec<Vec<Matrix>> = (0..n)
            .map(|i| {
                let d = quiver.weight(i) as usize;
                subspaces(tower.field(d), rep.dims[i] as usize, e[i] as usize)
            })
            .collect();
        if cands.iter().any(|c| c.is_empty()) {
            return None;
        }
        let arrows = quiver.arrow_instances();
        let mut images = Vec::with_capacity(arrows.len());
        let mut targets = Vec::with_capacity(arrows.len());
        for (idx, &(i, j)) in arrows.iter().enumerate() {
            let (di, dj) = (quiver.weight(i) as usize, quiver.weight(j) as usize);
            let g = gcd_usize(di, dj);
            let fg = tower.field(g);
            let a = &rep.arrow_maps[idx];
            images.push(
                cands[i]
                    .iter()
                    .map(|u| {
                        let rb = res_basis(tower, di, g, u);
                        (0..rb.rows()).map(|r| a.mul_vec(fg, rb.row(r))).collect()
                    })
                    .collect(),
            );
            targets.push(
                cands[j]
                    .iter()
                    .map(|u| {
                        let mut rb = res_basis(tower, dj, g, u);
                        let pivots = rb.rref_in_place(fg);
                        (rb, pivots)
                    })
                    .collect(),
            );
        }
        Some(SubrepSearch {
            tower,
            rep,
            cands,
            images,
            targets,
        })
    }

    /// Whether arrow `idx` maps source candidate `ci` into target
    /// candidate `cj`.
    fn arrow_ok(&self, idx: usize, ci: usize, cj: usize) -> bool {
        let (i, j) = self.rep.quiver().arrow_instances()[idx];
        let (di, dj) = (
            self.rep.quiver().weight(i) as usize,
            self.rep.quiver().weight(j) as usize,
        );
        let g = gcd_usize(di, dj);
        let fg = self.tower.field(g);
        let (rref, pivots) = &self.targets[idx][cj];
        self.images[idx][ci].iter().all(|img| {
            let mut v = img.clone();
            reduce_vector(fg, rref, pivots, &mut v);
            v.iter().all(|&x| x == 0)
        })
    }

    /// All closed candidate tuples, as per-vertex candidate indices.
    fn tuples(&self) -> Vec<Vec<usize>> {
        let n = self.rep.quiver().rank();
        let arrows = self.rep.quiver().arrow_instances();
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        fn go(
            s: &SubrepSearch,
            arrows: &[(usize, usize)],
            vertex: usize,
            choice: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let n = s.rep.quiver().rank();
            if vertex == n {
                out.push(choice.clone());
                return;
            }
            'cand: for ci in 0..s.cands[vertex].len() {
                choice[vertex] = ci;
                // Check every arrow whose endpoints are both assigned.
                for (idx, &(i, j)) in arrows.iter().enumerate() {
                    if (i == vertex && j <= vertex) || (j == vertex && i <= vertex) {
                        if !s.arrow_ok(idx, choice[i], choice[j]) {
                            continue 'cand;
                        }
                    }
                }
                go(s, arrows, vertex + 1, choice, out);
            }
        }
        go(self, &arrows, 0, &mut choice, &mut out);
        out
    }

    /// The subrepresentation carried by a closed tuple, in the coordinates
    /// given by the candidate bases.
    fn sub_rep(&self, tuple: &[usize]) -> QuiverRep {
        let quiver = self.rep.quiver().clone();
        let n = quiver.rank();
        let e: DimVector = (0..n).map(|i| self.cands[i][tuple[i]].rows() as i64).collect();
        let arrows = quiver.arrow_instances();
        let maps = arrows
            .iter()
            .enumerate()
            .map(|(idx, &(i, j))| {
                let (di, dj) = (quiver.weight(i) as usize, quiver.weight(j) as usize);
                let g = gcd_usize(di, dj);
                let fg = self.tower.field(g);
                let uj = &self.cands[j][tuple[j]];
                let basis_j = res_basis(self.tower, dj, g, uj);
                let imgs = &self.images[idx][tuple[i]];
                let rows = basis_j.rows();
                if rows == 0 || imgs.is_empty() {
                    let (r, c, _) = arrow_shape(&quiver, &e, i, j);
                    return Matrix::zero(r, c);
                }
                // Solve basis_j^T * X = images^T: columns of X are the
                // coefficients of each image in the restricted basis.
                let mut bt = Matrix::zero(basis_j.cols(), rows);
                for r in 0..rows {
                    for c in 0..basis_j.cols() {
                        bt.set(c, r, basis_j.get(r, c));
                    }
                }
                let mut rhs = Matrix::zero(basis_j.cols(), imgs.len());
                for (c, img) in imgs.iter().enumerate() {
                    for (r, &x) in img.iter().enumerate() {
                        rhs.set(r, c, x);
                    }
                }
                solve_full_rank(fg, &bt, &rhs)
                    .expect("closed tuples have images inside the target span")
            })
            .collect();
        QuiverRep::new(quiver, self.rep.q, e, maps)
            .expect("induced maps have the right shapes")
    }

    /// The quotient representation of a closed tuple, in the coordinates
    /// of the non-pivot columns of each candidate basis.
    fn quotient_rep(&self, tuple: &[usize]) -> QuiverRep {
        let quiver = self.rep.quiver().clone();
        let n = quiver.rank();
        // Pivots of each chosen candidate (candidates are already RREF).
        let mut pivots = Vec::with_capacity(n);
        let mut co_cols: Vec<Vec<usize>> = Vec::with_capacity(n);
        for i in 0..n {
            let d = quiver.weight(i) as usize;
            let f = self.tower.field(d);
            let mut m = self.cands[i][tuple[i]].clone();
            let piv = m.rref_in_place(f);
            co_cols.push(
                (0..self.rep.dims[i] as usize)
                    .filter(|c| !piv.contains(c))
                    .collect(),
            );
            pivots.push(piv);
        }
        let e: DimVector = (0..n).map(|i| co_cols[i].len() as i64).collect();
        let arrows = quiver.arrow_instances();
        let maps = arrows
            .iter()
            .enumerate()
            .map(|(idx, &(i, j))| {
                let (di, dj) = (quiver.weight(i) as usize, quiver.weight(j) as usize);
                let g = gcd_usize(di, dj);
                let (fg, fdi) = (self.tower.field(g), self.tower.field(di));
                let a = &self.rep.arrow_maps[idx];
                let (rows, cols, _) = arrow_shape(&quiver, &e, i, j);
                let mut out = Matrix::zero(rows, cols);
                let uj = &self.cands[j][tuple[j]];
                let y = fdi.gen_x();
                for (cc, &col) in co_cols[i].iter().enumerate() {
                    for t in 0..(di / g) {
                        // Lift: y^t times the unit vector at a non-pivot
                        // column of the source.
                        let mut lift = vec![0u64; self.rep.dims[i] as usize];
                        lift[col] = fdi.pow(y, t as u64);
                        let img = a.mul_vec(fg, &res_vector(self.tower, di, g, &lift));
                        // Back to ambient vertex-j coordinates, reduce by
                        // the subspace, read off non-pivot entries.
                        let mut ambient = unres_vector(self.tower, dj, g, &img);
                        let fdj = self.tower.field(dj);
                        reduce_vector(fdj, uj, &pivots[j], &mut ambient);
                        let quo: Vec<u64> =
                            co_cols[j].iter().map(|&c| ambient[c]).collect();
                        let quo_res = res_vector(self.tower, dj, g, &quo);
                        for (r, &x) in quo_res.iter().enumerate() {
                            out.set(r, cc * (di / g) + t, x);
                        }
                    }
                }
                out
            })
            .collect();
        QuiverRep::new(quiver, self.rep.q, e, maps)
            .expect("quotient maps have the right shapes")
    }
}

/// Number of subrepresentations of `v` with dimension vector `e`.
pub fn subrep_count(tower: &FieldTower, v: &QuiverRep, e: &[i64]) -> u64 {
    match SubrepSearch::new(tower, v, e) {
        None => 0,
        Some(s) => s.tuples().len() as u64,
    }
}

/// All subrepresentations of dimension `e`, with their quotients.
pub fn subrep_quotient_pairs(
    tower: &FieldTower,
    v: &QuiverRep,
    e: &[i64],
) -> Vec<(QuiverRep, QuiverRep)> {
    match SubrepSearch::new(tower, v, e) {
        None => Vec::new(),
        Some(s) => s
            .tuples()
            .iter()
            .map(|t| (s.sub_rep(t), s.quotient_rep(t)))
            .collect(),
    }
}

/// Number of flags `0 = V_m c ... c V_0 = V` whose `k`-th quotient
/// `V_(k-1)/V_k` is the `a_k`-th power of the simple at `word[k]`.
pub fn typed_flag_count(tower: &FieldTower, v: &QuiverRep, word: &[usize], a: &[i64]) -> u64 {
    assert_eq!(word.len(), a.len(), "flag type length mismatch");
    assert!(a.iter().all(|&x| x >= 0), "negative multiplicities");
    typed_flag_rec(tower, v, word, a, true)
}

fn typed_flag_rec(
    tower: &FieldTower,
    v: &QuiverRep,
    word: &[usize],
    a: &[i64],
    parallel: bool,
) -> u64 {
    if word.is_empty() {
        return if v.dims().iter().all(|&x| x == 0) { 1 } else { 0 };
    }
    let mut e = v.dims().clone();
    e[word[0]] -= a[0];
    if e[word[0]] < 0 {
        return 0;
    }
    let Some(search) = SubrepSearch::new(tower, v, &e) else {
        return 0;
    };
    let tuples = search.tuples();
    let step = |t: &Vec<usize>| {
        let sub = search.sub_rep(t);
        typed_flag_rec(tower, &sub, &word[1..], &a[1..], false)
    };
    if parallel {
        tuples.par_iter().map(step).sum()
    } else {
        tuples.iter().map(step).sum()
    }
}

/// Number of complete flags of type `j`: every quotient is a single simple.
pub fn flag_count(tower: &FieldTower, v: &QuiverRep, j: &[usize]) -> u64 {
    let ones = vec![1i64; j.len()];
    typed_flag_count(tower, v, j, &ones)
}

// ---------------------------------------------------------------------------
// Homomorphisms and rigidity.
// ---------------------------------------------------------------------------

/// Dimension over `F_q` of the space of homomorphisms `M -> N`
/// (vertex-wise linear maps over the vertex fields commuting with all
/// arrows).
pub fn hom_dim(tower: &FieldTower, m: &QuiverRep, n: &QuiverRep) -> usize {
    assert_eq!(m.quiver(), n.quiver(), "homomorphisms across quivers");
    assert_eq!(m.q(), n.q(), "homomorphisms across base fields");
    let quiver = m.quiver();
    let rank = quiver.rank();
    // Unknowns: entries of each vertex map N.dims x M.dims over the vertex
    // field, coordinatized over the base field.
    let mut unknown_offsets = Vec::with_capacity(rank);
    let mut total_unknowns = 0usize;
    for i in 0..rank {
        unknown_offsets.push(total_unknowns);
        let d = quiver.weight(i) as usize;
        total_unknowns += (n.dims()[i] * m.dims()[i]) as usize * d;
    }
    if total_unknowns == 0 {
        return 0;
    }
    let arrows = quiver.arrow_instances();
    let mut total_eqs = 0usize;
    for (idx, &(i, j)) in arrows.iter().enumerate() {
        let g = gcd_usize(quiver.weight(i) as usize, quiver.weight(j) as usize);
        let cell_rows = (n.dims()[j] as usize) * (quiver.weight(j) as usize / g);
        let cell_cols = (m.dims()[i] as usize) * (quiver.weight(i) as usize / g);
        total_eqs += cell_rows * cell_cols * g;
        let _ = idx;
    }
    if total_eqs == 0 {
        return total_unknowns;
    }
    let base = tower.base();
    let mut system = Matrix::zero(total_eqs, total_unknowns);
    for vertex in 0..rank {
        let d = quiver.weight(vertex) as usize;
        let fd = tower.field(d);
        let y = fd.gen_x();
        let (rows_v, cols_v) = (n.dims()[vertex] as usize, m.dims()[vertex] as usize);
        for br in 0..rows_v {
            for bc in 0..cols_v {
                for t in 0..d {
                    let unknown =
                        unknown_offsets[vertex] + (br * cols_v + bc) * d + t;
                    // The basis map with a single power-basis entry.
                    let mut phi = Matrix::zero(rows_v, cols_v);
                    phi.set(br, bc, fd.pow(y, t as u64));
                    // Its contribution to each arrow constraint.
                    let mut eq_base = 0usize;
                    for (idx, &(i, j)) in arrows.iter().enumerate() {
                        let g = gcd_usize(
                            quiver.weight(i) as usize,
                            quiver.weight(j) as usize,
                        );
                        let fg = tower.field(g);
                        let cell_rows =
                            (n.dims()[j] as usize) * (quiver.weight(j) as usize / g);
                        let cell_cols =
                            (m.dims()[i] as usize) * (quiver.weight(i) as usize / g);
                        if vertex == i || vertex == j {
                            // Constraint: res(phi_j) A_M - A_N res(phi_i) = 0.
                            let cell = if vertex == j {
                                res_matrix(tower, d, g, &phi).mul(fg, m.arrow_map(idx))
                            } else {
                                let prod =
                                    n.arrow_map(idx).mul(fg, &res_matrix(tower, d, g, &phi));
                                // Negate for the subtracted term.
                                let mut neg = prod.clone();
                                for r in 0..neg.rows() {
                                    for c in 0..neg.cols() {
                                        neg.set(r, c, fg.neg(prod.get(r, c)));
                                    }
                                }
                                neg
                            };
                            for p in 0..cell_rows {
                                for qq in 0..cell_cols {
                                    let val = cell.get(p, qq);
                                    let co = tower.coords(g, 1, val);
                                    for (w, &x) in co.iter().enumerate() {
                                        let eq = eq_base + (p * cell_cols + qq) * g + w;
                                        system.set(eq, unknown, x);
                                    }
                                }
                            }
                        }
                        eq_base += cell_rows * cell_cols * g;
                    }
                }
            }
        }
    }
    total_unknowns - system.rank(base)
}

/// Whether `V` is rigid: the homomorphism dimension equals the Euler form
/// of the dimension vector with itself (no self-extensions).
pub fn is_rigid(tower: &FieldTower, v: &QuiverRep) -> bool {
    hom_dim(tower, v, v) as i64 == v.quiver().euler_form(v.dims(), v.dims())
}

/// The first rigid representation of dimension `nu` in deterministic scan
/// order over arrow-map tuples.
pub fn rigid_rep(tower: &FieldTower, quiver: &ValuedQuiver, nu: &[i64]) -> Result<QuiverRep, String> {
    let mut found = None;
    for_each_arrow_tuple(tower, quiver, nu, &mut |rep| {
        if found.is_none() && is_rigid(tower, rep) {
            found = Some(rep.clone());
        }
        found.is_some()
    });
    found.ok_or_else(|| format!("no rigid representation of dimension {nu:?} over F_{}", tower.q()))
}

/// Enumerate all representations with the given dimension vector in
/// deterministic (odometer) order, stopping early when the visitor
/// returns `true`.
fn for_each_arrow_tuple(
    tower: &FieldTower,
    quiver: &ValuedQuiver,
    dims: &[i64],
    visit: &mut impl FnMut(&QuiverRep) -> bool,
) {
    let arrows = quiver.arrow_instances();
    let mut shapes = Vec::with_capacity(arrows.len());
    let mut sizes = Vec::with_capacity(arrows.len());
    let mut total_entries = 0usize;
    for &(i, j) in &arrows {
        let (rows, cols, g) = arrow_shape(quiver, dims, i, j);
        shapes.push((rows, cols));
        sizes.push(tower.field(g).size());
        total_entries += rows * cols;
    }
    let mut entries = vec![0u64; total_entries];
    loop {
        let mut maps = Vec::with_capacity(arrows.len());
        let mut offset = 0;
        for (idx, &(rows, cols)) in shapes.iter().enumerate() {
            let mut m = Matrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, entries[offset + r * cols + c]);
                }
            }
            offset += rows * cols;
            let _ = idx;
            maps.push(m);
        }
        let rep = QuiverRep::new(quiver.clone(), tower.q(), dims.to_vec(), maps)
            .expect("odometer entries are in range");
        if visit(&rep) {
            return;
        }
        // Odometer step, least-significant entry first, per-arrow radix.
        let mut t = 0;
        let mut arrow_idx = 0;
        let mut arrow_end = shapes.first().map_or(0, |&(r, c)| r * c);
        loop {
            if t == total_entries {
                return;
            }
            while t >= arrow_end {
                arrow_idx += 1;
                let (r, c) = shapes[arrow_idx];
                arrow_end += r * c;
            }
            entries[t] += 1;
            if entries[t] < sizes[arrow_idx] {
                break;
            }
            entries[t] = 0;
            t += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Automorphisms, orbits, and isomorphism classes.
// ---------------------------------------------------------------------------

/// Order of `GL_n` over a field with `bigq` elements: build the rows of an
/// invertible matrix one at a time.
pub fn gl_order(bigq: u64, n: usize) -> BigInt {
    let q = BigInt::from(bigq);
    let qn = num::pow::pow(q.clone(), n);
    let mut out = BigInt::one();
    let mut qt = BigInt::one();
    for _ in 0..n {
        out *= &qn - &qt;
        qt *= &q;
    }
    out
}

/// One generator of the base-change group, with its action on each arrow
/// precomputed in restricted coordinates.
struct GenAction {
    /// Per arrow: `Some((premultiply, matrix))`.
    arrow_actions: Vec<Option<(bool, Matrix)>>,
}

fn base_change_generators(tower: &FieldTower, quiver: &ValuedQuiver, dims: &[i64]) -> Vec<GenAction> {
    let rank = quiver.rank();
    let arrows = quiver.arrow_instances();
    let mut out = Vec::new();
    for vertex in 0..rank {
        let v = dims[vertex] as usize;
        if v == 0 {
            continue;
        }
        let d = quiver.weight(vertex) as usize;
        let fd = tower.field(d);
        // Generator matrices over the vertex field, with explicit inverses.
        let mut gens: Vec<(Matrix, Matrix)> = Vec::new();
        let gamma = fd.primitive_element();
        if gamma != 1 {
            for r in 0..v {
                let mut g = Matrix::identity(v);
                g.set(r, r, gamma);
                let mut gi = Matrix::identity(v);
                gi.set(r, r, fd.inv(gamma));
                gens.push((g, gi));
            }
        }
        for r in 0..v {
            for c in 0..v {
                if r == c {
                    continue;
                }
                for lam in 1..fd.size() {
                    let mut g = Matrix::identity(v);
                    g.set(r, c, lam);
                    let mut gi = Matrix::identity(v);
                    gi.set(r, c, fd.neg(lam));
                    gens.push((g, gi));
                }
            }
        }
        for (g, gi) in gens {
            let arrow_actions = arrows
                .iter()
                .map(|&(i, j)| {
                    let gcd = gcd_usize(
                        quiver.weight(i) as usize,
                        quiver.weight(j) as usize,
                    );
                    if j == vertex {
                        Some((true, res_matrix(tower, d, gcd, &g)))
                    } else if i == vertex {
                        Some((false, res_matrix(tower, d, gcd, &gi)))
                    } else {
                        None
                    }
                })
                .collect();
            out.push(GenAction { arrow_actions });
        }
    }
    out
}

/// Breadth-first orbit of a representation under vertex-wise base change.
/// Returns the set of reachable flattened arrow tuples.
fn orbit_states(tower: &FieldTower, rep: &QuiverRep) -> HashSet<Vec<u64>> {
    let quiver = rep.quiver();
    let arrows = quiver.arrow_instances();
    let gens = base_change_generators(tower, quiver, rep.dims());
    let shapes: Vec<(usize, usize)> = rep.arrow_maps.iter().map(|m| (m.rows(), m.cols())).collect();
    let gcd_fields: Vec<&FiniteField> = arrows
        .iter()
        .map(|&(i, j)| {
            tower.field(gcd_usize(
                quiver.weight(i) as usize,
                quiver.weight(j) as usize,
            ))
        })
        .collect();
    let unflatten = |flat: &[u64]| -> Vec<Matrix> {
        let mut out = Vec::with_capacity(shapes.len());
        let mut offset = 0;
        for &(r, c) in &shapes {
            let mut m = Matrix::zero(r, c);
            m.data.copy_from_slice(&flat[offset..offset + r * c]);
            offset += r * c;
            out.push(m);
        }
        out
    };
    let mut seen = HashSet::new();
    let start = rep.flat();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(state) = frontier.pop() {
        let mats = unflatten(&state);
        for gen in &gens {
            let mut next = Vec::new();
            for (idx, action) in gen.arrow_actions.iter().enumerate() {
                let m = match action {
                    None => mats[idx].clone(),
                    Some((true, r)) => r.mul(gcd_fields[idx], &mats[idx]),
                    Some((false, r)) => mats[idx].mul(gcd_fields[idx], r),
                };
                next.extend_from_slice(m.data());
            }
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// Exact order of the automorphism group: the base-change group order
/// divided by the orbit size.
pub fn aut_count(tower: &FieldTower, v: &QuiverRep) -> BigInt {
    let quiver = v.quiver();
    let mut group = BigInt::one();
    for i in 0..quiver.rank() {
        let d = quiver.weight(i) as usize;
        group *= gl_order(tower.field(d).size(), v.dims()[i] as usize);
    }
    let orbit = orbit_states(tower, v).len();
    let (quotient, rem) = num::Integer::div_rem(&group, &BigInt::from(orbit));
    assert!(rem.is_zero(), "the orbit size must divide the group order");
    quotient
}

/// An isomorphism class of representations: a canonical representative
/// (the lexicographically smallest arrow tuple in the orbit) plus cheap
/// invariants and the automorphism count.
#[derive(Clone, Debug)]
pub struct RepClass {
    rep: QuiverRep,
    canon: Vec<u64>,
    end_dim: usize,
    aut: BigInt,
}

impl RepClass {
    pub fn new(tower: &FieldTower, rep: &QuiverRep) -> RepClass {
        let states = orbit_states(tower, rep);
        Self::from_orbit(tower, rep, &states)
    }

    fn from_orbit(tower: &FieldTower, rep: &QuiverRep, states: &HashSet<Vec<u64>>) -> RepClass {
        let canon = states
            .iter()
            .min()
            .expect("an orbit is never empty")
            .clone();
        let quiver = rep.quiver().clone();
        let arrows = quiver.arrow_instances();
        let mut maps = Vec::with_capacity(arrows.len());
        let mut offset = 0;
        for m in &rep.arrow_maps {
            let (r, c) = (m.rows(), m.cols());
            let mut out = Matrix::zero(r, c);
            out.data.copy_from_slice(&canon[offset..offset + r * c]);
            offset += r * c;
            maps.push(out);
        }
        let canonical = QuiverRep::new(quiver.clone(), rep.q(), rep.dims().clone(), maps)
            .expect("canonical tuples keep their shapes");
        let mut group = BigInt::one();
        for i in 0..quiver.rank() {
            let d = quiver.weight(i) as usize;
            group *= gl_order(tower.field(d).size(), rep.dims()[i] as usize);
        }
        let aut = {
            let (quotient, rem) =
                num::Integer::div_rem(&group, &BigInt::from(states.len()));
            assert!(rem.is_zero(), "the orbit size must divide the group order");
            quotient
        };
        let end_dim = hom_dim(tower, &canonical, &canonical);
        RepClass {
            rep: canonical,
            canon,
            end_dim,
            aut,
        }
    }

    pub fn rep(&self) -> &QuiverRep {
        &self.rep
    }

    pub fn dims(&self) -> &DimVector {
        self.rep.dims()
    }

    pub fn total_dim(&self) -> i64 {
        self.rep.total_dim()
    }

    pub fn end_dim(&self) -> usize {
        self.end_dim
    }

    /// Order of the automorphism group of any representative.
    pub fn aut(&self) -> &BigInt {
        &self.aut
    }
}

impl PartialEq for RepClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep.q() == other.rep.q()
            && self.rep.dims() == other.rep.dims()
            && self.canon == other.canon
    }
}

impl Eq for RepClass {}

impl Ord for RepClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rep
            .q()
            .cmp(&other.rep.q())
            .then_with(|| self.rep.dims().cmp(other.rep.dims()))
            .then_with(|| self.canon.cmp(&other.canon))
    }
}

impl PartialOrd for RepClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "class of dim {:?} over F_{} (end dim {})",
            self.rep.dims(),
            self.rep.q(),
            self.end_dim
        )
    }
}

/// All isomorphism classes with the given dimension vector, in canonical
/// order.
pub fn rep_classes(tower: &FieldTower, quiver: &ValuedQuiver, dims: &[i64]) -> Vec<RepClass> {
    let mut visited: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    for_each_arrow_tuple(tower, quiver, dims, &mut |rep| {
        let flat = rep.flat();
        if !visited.contains(&flat) {
            let states = orbit_states(tower, rep);
            out.push(RepClass::from_orbit(tower, rep, &states));
            visited.extend(states);
        }
        false
    });
    out.sort();
    out
}

/// All isomorphism classes with total base-field dimension at most
/// `max_total`, grouped by dimension vector in lexicographic order.
pub fn rep_classes_up_to(
    tower: &FieldTower,
    quiver: &ValuedQuiver,
    max_total: i64,
) -> Vec<RepClass> {
    let rank = quiver.rank();
    let mut out = Vec::new();
    let mut dims = vec![0i64; rank];
    loop {
        let total: i64 = dims
            .iter()
            .zip(quiver.weights())
            .map(|(&v, &d)| v * d)
            .sum();
        if total <= max_total {
            out.extend(rep_classes(tower, quiver, &dims));
        }
        // Odometer over dimension vectors bounded by max_total per vertex.
        let mut t = 0;
        loop {
            if t == rank {
                return out;
            }
            dims[t] += 1;
            if dims[t] * quiver.weight(t) <= max_total {
                break;
            }
            dims[t] = 0;
            t += 1;
        }
    }
}

/// The extension number `F^V_(U,W)`: how many subrepresentations of `V`
/// are isomorphic to `W` with quotient isomorphic to `U`.
pub fn hall_number(tower: &FieldTower, u: &RepClass, w: &RepClass, v: &RepClass) -> u64 {
    let expected: DimVector = u
        .dims()
        .iter()
        .zip(w.dims())
        .map(|(a, b)| a + b)
        .collect();
    if &expected != v.dims() {
        return 0;
    }
    let mut count = 0;
    for (sub, quo) in subrep_quotient_pairs(tower, v.rep(), w.dims()) {
        if &RepClass::new(tower, &sub) == w && &RepClass::new(tower, &quo) == u {
            count += 1;
        }
    }
    count
}

// ---------------------------------------------------------------------------
// Counting polynomials.
// ---------------------------------------------------------------------------

/// A polynomial in `q` with integer coefficients, produced by exact
/// interpolation of a counting function.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountingPolynomial {
    /// Coefficients in ascending degree, trailing zeros trimmed.
    coeffs: Vec<BigInt>,
}

impl CountingPolynomial {
    pub fn constant(c: BigInt) -> Self {
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        CountingPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        let mut out = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            out = out * &q + c;
        }
        out
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| match t {
                0 => format!("{c}"),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{t}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Exact Lagrange interpolation of `counter` at the given points; fails if
/// the result has a non-integer coefficient.
pub fn interpolate_at(
    counter: &mut dyn FnMut(u64) -> BigInt,
    points: &[u64],
) -> Result<CountingPolynomial, String> {
    if points.is_empty() {
        return Err("no interpolation points".into());
    }
    let xs: Vec<BigRational> = points
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    let ys: Vec<BigRational> = points
        .iter()
        .map(|&x| BigRational::from_integer(counter(x)))
        .collect();
    // Accumulate sum of y_i * prod_{j != i} (x - x_j)/(x_i - x_j) in
    // coefficient form.
    let mut acc = vec![BigRational::zero(); points.len()];
    for i in 0..points.len() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..points.len() {
            if i == j {
                continue;
            }
            // basis *= (x - x_j)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (t, c) in basis.iter().enumerate() {
                next[t + 1] += c;
                next[t] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (t, c) in basis.iter().enumerate() {
            acc[t] += c * &scale;
        }
    }
    let mut coeffs = Vec::with_capacity(acc.len());
    for (t, c) in acc.iter().enumerate() {
        if !c.denom().is_one() {
            return Err(format!(
                "interpolated coefficient of q^{t} is not an integer: {c}"
            ));
        }
        coeffs.push(c.numer().clone());
    }
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(CountingPolynomial { coeffs })
}

/// Interpolate a counting function of the field size into an integer
/// polynomial: sample at `degree_bound + 3` prime powers (two extra as a
/// safety margin on the caller's degree bound) and verify the result at
/// one more held-out prime power.
pub fn interpolate_count(
    counter: &mut dyn FnMut(u64) -> BigInt,
    degree_bound: usize,
) -> Result<CountingPolynomial, String> {
    let points: Vec<u64> = prime_powers().take(degree_bound + 2 + 1 + 1).collect();
    let (sample, holdout) = points.split_at(points.len() - 1);
    let poly = interpolate_at(counter, sample)?;
    let expected = counter(holdout[0]);
    if poly.eval(holdout[0]) != expected {
        return Err(format!(
            "interpolation failed held-out verification at q = {}: polynomial gives {}, count is {}",
            holdout[0],
            poly.eval(holdout[0]),
            expected
        ));
    }
    Ok(poly)
}
