//! Symmetrizable Cartan data, valued quivers, and root-lattice forms.
//!
//! A [`CartanData`] is a symmetrizable generalized Cartan matrix `A = (a_ij)`
//! together with positive symmetrizers `d = (d_i)` satisfying
//! `d_i a_ij = d_j a_ji`.  The root lattice is `Z^n` on the simple-root basis
//! `alpha_i`, with the symmetric form `(alpha_i, alpha_j) = d_i a_ij`.
//!
//! A [`ValuedQuiver`] is an acyclic quiver with vertex weights `d_i` and
//! arrow multiplicities `n_ij`.  It determines
//!
//! * a skew-symmetrizable exchange-type matrix
//!   `b_ij = +/- n_ij d_j / gcd(d_i, d_j)` (sign by orientation),
//! * the Cartan matrix `a_ij = -|b_ij|` (off-diagonal),
//! * the non-symmetric Euler–Ringel form
//!   `<alpha_i, alpha_j> = d_i` if `i = j` and `-max(d_i b_ij, 0)` otherwise,
//!   whose symmetrization recovers `(.,.)`.
//!
//! Dimension vectors of quiver representations live in the same lattice
//! (coordinates count vector-space dimensions over the vertex fields), so a
//! single [`DimVector`] type serves roots and dimension vectors alike.

use std::fmt;

/// Element of the root lattice `Z^n` in simple-root coordinates.
pub type DimVector = Vec<i64>;

/// Add two lattice vectors.
pub fn dim_add(a: &[i64], b: &[i64]) -> DimVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Subtract two lattice vectors.
pub fn dim_sub(a: &[i64], b: &[i64]) -> DimVector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The `i`-th unit vector in an `n`-dimensional lattice.
pub fn unit_vector(n: usize, i: usize) -> DimVector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Symmetrizable generalized Cartan matrix with chosen symmetrizers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CartanData {
    labels: Vec<String>,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

impl CartanData {
    /// Validate and build: `a_ii = 2`, off-diagonal entries nonpositive,
    /// `d_i >= 1`, and the symmetrizing condition `d_i a_ij = d_j a_ji`.
    pub fn new(labels: Vec<String>, a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self, String> {
        let n = labels.len();
        if a.len() != n || d.len() != n {
            return Err(format!("Cartan data size mismatch: {} labels, {} rows, {} symmetrizers", n, a.len(), d.len()));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(format!("Cartan matrix row {} has length {}, expected {}", i, row.len(), n));
            }
            if row[i] != 2 {
                return Err(format!("diagonal Cartan entry a[{0}][{0}] = {1}, expected 2", i, row[i]));
            }
        }
        for (i, &di) in d.iter().enumerate() {
            if di < 1 {
                return Err(format!("symmetrizer d[{}] = {} is not positive", i, di));
            }
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return Err(format!("off-diagonal Cartan entry a[{}][{}] = {} is positive", i, j, a[i][j]));
                }
                if d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(format!(
                        "not symmetrizable: d[{i}]*a[{i}][{j}] = {} but d[{j}]*a[{j}][{i}] = {}",
                        d[i] * a[i][j],
                        d[j] * a[j][i]
                    ));
                }
            }
        }
        Ok(CartanData { labels, a, d })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn symmetrizer(&self, i: usize) -> i64 {
        self.d[i]
    }

    /// `(alpha_i, alpha_j) = d_i a_ij`.
    pub fn sym(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.a[i][j]
    }

    /// The symmetric bilinear form extended to lattice vectors.
    pub fn sym_form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        assert!(x.len() == n && y.len() == n, "vector length mismatch with Cartan rank");
        let mut total = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                total += x[i] * y[j] * self.sym(i, j);
            }
        }
        total
    }

    /// Simple reflection `s_i(x) = x - <alpha_i^v, x> alpha_i` where
    /// `<alpha_i^v, x> = (alpha_i, x)/d_i = sum_j a_ij x_j`.
    pub fn simple_reflection(&self, i: usize, x: &[i64]) -> DimVector {
        let n = self.rank();
        assert!(i < n && x.len() == n);
        let pairing: i64 = (0..n).map(|j| self.a[i][j] * x[j]).sum();
        let mut out = x.to_vec();
        out[i] -= pairing;
        out
    }
}

impl fmt::Display for CartanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Cartan data on {:?} with d = {:?}:", self.labels, self.d)?;
        for row in &self.a {
            writeln!(f, "  {:?}", row)?;
        }
        Ok(())
    }
}

/// Acyclic valued quiver: vertex weights `d_i` and arrow multiplicities.
///
/// Arrows are stored per ordered pair: `arrow_mult[i][j]` is the number of
/// arrows `i -> j`.  At most one of `arrow_mult[i][j]`, `arrow_mult[j][i]`
/// is nonzero and the underlying directed graph is acyclic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValuedQuiver {
    labels: Vec<String>,
    d: Vec<i64>,
    arrow_mult: Vec<Vec<u32>>,
    b: Vec<Vec<i64>>,
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl ValuedQuiver {
    /// Validate and build from a list of `(source, target, multiplicity)`
    /// triples (indices into `labels`).  Repeated `(source, target)` pairs
    /// accumulate their multiplicities.
    pub fn new(
        labels: Vec<String>,
        d: Vec<i64>,
        arrows: &[(usize, usize, u32)],
    ) -> Result<Self, String> {
        let n = labels.len();
        if d.len() != n {
            return Err(format!("{} vertex weights for {} vertices", d.len(), n));
        }
        if let Some((i, &bad)) = d.iter().enumerate().find(|(_, &x)| x < 1) {
            return Err(format!("vertex weight d[{}] = {} is not positive", i, bad));
        }
        let mut arrow_mult = vec![vec![0u32; n]; n];
        for &(i, j, m) in arrows {
            if i >= n || j >= n {
                return Err(format!("arrow ({}, {}) references a missing vertex", i, j));
            }
            if i == j {
                return Err(format!("loop at vertex {} is not allowed", i));
            }
            if m == 0 {
                return Err(format!("arrow ({}, {}) has zero multiplicity", i, j));
            }
            arrow_mult[i][j] += m;
        }
        for i in 0..n {
            for j in 0..n {
                if arrow_mult[i][j] > 0 && arrow_mult[j][i] > 0 {
                    return Err(format!("vertices {} and {} carry arrows in both directions", i, j));
                }
            }
        }
        // Acyclicity by Kahn's algorithm.
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if arrow_mult[i][j] > 0 {
                    indeg[j] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for j in 0..n {
                if arrow_mult[v][j] > 0 {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push(j);
                    }
                }
            }
        }
        if seen != n {
            return Err("quiver contains a directed cycle".into());
        }
        // Exchange-type matrix b_ij = n_ij d_j / gcd(d_i, d_j), signed by
        // orientation.
        let mut b = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if arrow_mult[i][j] > 0 {
                    let g = gcd64(d[i], d[j]);
                    b[i][j] = arrow_mult[i][j] as i64 * d[j] / g;
                    b[j][i] = -(arrow_mult[i][j] as i64) * d[i] / g;
                }
            }
        }
        Ok(ValuedQuiver { labels, d, arrow_mult, b })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn weights(&self) -> &[i64] {
        &self.d
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_mult(&self, i: usize, j: usize) -> u32 {
        self.arrow_mult[i][j]
    }

    /// All arrow instances `(source, target)` with multiplicity expanded,
    /// in deterministic order.
    pub fn arrow_instances(&self) -> Vec<(usize, usize)> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..self.arrow_mult[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Skew-symmetrizable matrix entry `b_ij`.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    /// The Cartan data underlying the quiver: `a_ij = -|b_ij|`.
    pub fn cartan(&self) -> CartanData {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = if i == j { 2 } else { -self.b[i][j].abs() };
            }
        }
        CartanData::new(self.labels.clone(), a, self.d.clone())
            .expect("a valued quiver always induces valid Cartan data")
    }

    /// Euler–Ringel form on simple roots:
    /// `<alpha_i, alpha_i> = d_i`, and for `i != j`
    /// `<alpha_i, alpha_j> = -max(d_i b_ij, 0)` (nonzero only when `i -> j`).
    pub fn euler(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.d[i]
        } else {
            -(self.d[i] * self.b[i][j]).max(0)
        }
    }

    /// The Euler–Ringel form extended to lattice vectors.
    pub fn euler_form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        assert!(x.len() == n && y.len() == n, "vector length mismatch with quiver rank");
        let mut total = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                total += x[i] * y[j] * self.euler(i, j);
            }
        }
        total
    }

    /// The linear involution-like operator
    /// `*v = sum_i <alpha_i^v, v> alpha_i` with coordinates
    /// `<alpha_i, v>/d_i` (always integral because every `<alpha_i, alpha_j>`
    /// is divisible by `d_i`).
    pub fn star(&self, v: &[i64]) -> DimVector {
        let n = self.rank();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let pairing: i64 = (0..n).map(|j| self.euler(i, j) * v[j]).sum();
                debug_assert_eq!(pairing % self.d[i], 0, "star coordinate must be integral");
                pairing / self.d[i]
            })
            .collect()
    }

    /// The quiver with all arrows reversed (same weights).
    pub fn opposite(&self) -> ValuedQuiver {
        let n = self.rank();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.arrow_mult[i][j] > 0 {
                    arrows.push((j, i, self.arrow_mult[i][j]));
                }
            }
        }
        ValuedQuiver::new(self.labels.clone(), self.d.clone(), &arrows)
            .expect("reversing an acyclic quiver stays acyclic")
    }
}

impl fmt::Display for ValuedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "valued quiver on {:?}, d = {:?}, arrows:", self.labels, self.d)?;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if self.arrow_mult[i][j] > 0 {
                    write!(f, " {}->{} (x{})", self.labels[i], self.labels[j], self.arrow_mult[i][j])?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod test_quivers {
    use super::*;

    pub fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// A2: 1 -> 2, trivial weights.
    pub fn a2() -> ValuedQuiver {
        ValuedQuiver::new(labels(&["1", "2"]), vec![1, 1], &[(0, 1, 1)]).unwrap()
    }

    /// A3: 1 -> 2 -> 3, trivial weights.
    pub fn a3() -> ValuedQuiver {
        ValuedQuiver::new(labels(&["1", "2", "3"]), vec![1, 1, 1], &[(0, 1, 1), (1, 2, 1)]).unwrap()
    }

    /// B2-type valued quiver: 1 -> 2 with d = (1, 2).
    pub fn b2() -> ValuedQuiver {
        ValuedQuiver::new(labels(&["1", "2"]), vec![1, 2], &[(0, 1, 1)]).unwrap()
    }

    /// G2-type valued quiver: 1 -> 2 with d = (1, 3).
    pub fn g2() -> ValuedQuiver {
        ValuedQuiver::new(labels(&["1", "2"]), vec![1, 3], &[(0, 1, 1)]).unwrap()
    }

    /// Kronecker quiver: two arrows 1 -> 2, trivial weights.
    pub fn kronecker() -> ValuedQuiver {
        ValuedQuiver::new(labels(&["1", "2"]), vec![1, 1], &[(0, 1, 2)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_quivers::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a2_forms() {
        let q = a2();
        assert_eq!(q.b(0, 1), 1);
        assert_eq!(q.b(1, 0), -1);
        let c = q.cartan();
        assert_eq!(c.entry(0, 1), -1);
        assert_eq!(c.entry(1, 0), -1);
        // Euler matrix [[1,-1],[0,1]].
        assert_eq!(q.euler(0, 0), 1);
        assert_eq!(q.euler(0, 1), -1);
        assert_eq!(q.euler(1, 0), 0);
        assert_eq!(q.euler(1, 1), 1);
        // Symmetric form (alpha_1, alpha_2) = -1.
        assert_eq!(c.sym(0, 1), -1);
        // star of the simple roots.
        assert_eq!(q.star(&[1, 0]), vec![1, 0]);
        assert_eq!(q.star(&[0, 1]), vec![-1, 1]);
    }

    #[test]
    fn valued_b2_and_g2_forms() {
        let q = b2();
        assert_eq!(q.b(0, 1), 2);
        assert_eq!(q.b(1, 0), -1);
        let c = q.cartan();
        assert_eq!(c.entry(0, 1), -2);
        assert_eq!(c.entry(1, 0), -1);
        assert_eq!(c.sym(0, 1), -2);
        assert_eq!(c.sym(1, 0), -2);
        assert_eq!(q.euler(0, 1), -2);
        assert_eq!(q.euler(1, 0), 0);
        assert_eq!(q.euler(1, 1), 2);

        let g = g2();
        assert_eq!(g.b(0, 1), 3);
        assert_eq!(g.cartan().entry(0, 1), -3);
        assert_eq!(g.cartan().entry(1, 0), -1);
        assert_eq!(g.euler(0, 1), -3);
        assert_eq!(g.euler(1, 1), 3);
    }

    #[test]
    fn kronecker_doubles_the_arrow() {
        let k = kronecker();
        assert_eq!(k.b(0, 1), 2);
        assert_eq!(k.cartan().entry(0, 1), -2);
        assert_eq!(k.arrow_instances(), vec![(0, 1), (0, 1)]);
        // Same b-matrix as B2 but different weights, hence different Euler
        // diagonal.
        assert_eq!(k.euler(1, 1), 1);
    }

    #[test]
    fn euler_symmetrization_is_the_symmetric_form() {
        for q in [a2(), a3(), b2(), g2(), kronecker()] {
            let c = q.cartan();
            let n = q.rank();
            let mut rng = ChaCha8Rng::seed_from_u64(0xCA27);
            for _ in 0..50 {
                let x: DimVector = (0..n).map(|_| rng.gen_range(-5..6)).collect();
                let y: DimVector = (0..n).map(|_| rng.gen_range(-5..6)).collect();
                assert_eq!(q.euler_form(&x, &y) + q.euler_form(&y, &x), c.sym_form(&x, &y));
                assert_eq!(c.sym_form(&x, &y), c.sym_form(&y, &x));
            }
        }
    }

    #[test]
    fn simple_reflections_are_involutions() {
        for q in [a3(), b2(), g2()] {
            let c = q.cartan();
            let n = c.rank();
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..50 {
                let x: DimVector = (0..n).map(|_| rng.gen_range(-4..5)).collect();
                for i in 0..n {
                    let y = c.simple_reflection(i, &x);
                    assert_eq!(c.simple_reflection(i, &y), x);
                    // Reflections preserve the symmetric form.
                    assert_eq!(c.sym_form(&y, &y), c.sym_form(&x, &x));
                }
            }
        }
    }

    #[test]
    fn b2_reflections_generate_the_eight_element_orbit() {
        // In type B2 the Weyl orbit of alpha_1 has 4 elements and the root
        // system has 8 roots in total.
        let c = b2().cartan();
        let mut roots = vec![vec![1, 0], vec![0, 1]];
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in frontier {
                for i in 0..2 {
                    let s = c.simple_reflection(i, &r);
                    if !roots.contains(&s) {
                        roots.push(s.clone());
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(roots.len(), 8);
    }

    #[test]
    fn validation_rejects_malformed_input() {
        // Non-symmetrizable Cartan matrix.
        let bad = CartanData::new(
            labels(&["1", "2"]),
            vec![vec![2, -1], vec![-2, 2]],
            vec![1, 1],
        );
        assert!(bad.is_err());
        // Positive off-diagonal entry.
        let bad = CartanData::new(labels(&["1", "2"]), vec![vec![2, 1], vec![1, 2]], vec![1, 1]);
        assert!(bad.is_err());
        // Cyclic quiver.
        let bad = ValuedQuiver::new(labels(&["1", "2"]), vec![1, 1], &[(0, 1, 1), (1, 0, 1)]);
        assert!(bad.is_err());
        // Loop.
        let bad = ValuedQuiver::new(labels(&["1"]), vec![1], &[(0, 0, 1)]);
        assert!(bad.is_err());
        // B2 with the valid pairing is accepted and symmetrizable.
        let good = CartanData::new(
            labels(&["1", "2"]),
            vec![vec![2, -2], vec![-1, 2]],
            vec![1, 2],
        );
        assert!(good.is_ok());
    }

    #[test]
    fn opposite_quiver_transposes_the_euler_form() {
        for q in [a2(), a3(), b2(), g2(), kronecker()] {
            let op = q.opposite();
            let n = q.rank();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(q.euler(i, j), op.euler(j, i));
                }
            }
            assert_eq!(q.cartan(), op.cartan());
        }
    }
}
