//! Quantum cluster algebras of acyclic valued quivers, realized inside a
//! based quantum torus, together with quantum cluster characters of quiver
//! representations.
//!
//! A [`Seed`] consists of an extended exchange matrix `B~` (one row per
//! variable, one column per mutable variable), a compatible skew form
//! recorded through the integer matrix `2L`, and the current cluster
//! variables.  The variables are stored as elements of the *ambient* quantum
//! torus, i.e. in the exponent coordinates of the initial cluster, so every
//! product along a mutation path is computed exactly in one fixed algebra.
//!
//! Mutation in direction `k` replaces `X_k` by the element `X'_k` determined
//! by the exchange relation
//!
//! ```text
//!     X'_k = M(b+ - e_k) + M(b- - e_k),
//! ```
//!
//! where `b+`/`b-` are the entrywise positive and negative parts of the
//! `k`-th column of `B~` and `M(a)` denotes the bar-invariant monomial with
//! exponent vector `a` in the current variables.  Concretely, `M(m) X_k` is
//! expanded as an honest product of torus elements and the relation is
//! resolved by exact right division, so a failure of the Laurent phenomenon
//! would surface as a hard error rather than a rounded answer.  The matrix
//! mutates by the usual rule
//!
//! ```text
//!     b'_ij = -b_ij                                if i = k or j = k,
//!     b'_ij = b_ij + [b_ik]_+ b_kj + b_ik [-b_kj]_+   otherwise,
//! ```
//!
//! and the skew form of the new cluster is recomputed directly from the
//! quasi-commutation of the new variables, then checked against the mutated
//! exchange matrix for compatibility.
//!
//! A [`CharacterContext`] connects this picture to the quantum torus side of
//! the Feigin homomorphisms.  For a word `i` that lists a complete adapted
//! vertex sequence twice, the quasi-commuting polynomial algebra on `i`
//! embeds into a based quantum torus by a lattice isomorphism `phi` sending
//! the monomial on a flag-type vector `a` to `X^(phi a)`; transporting the
//! polynomial commutation form through `phi` produces the seed form, which
//! is compatible with the extended exchange matrix of the quiver by
//! construction.  Under this identification the quantum character of a
//! representation `V` becomes the quantum cluster character
//!
//! ```text
//!     X_V = sum_e  v^(-<e, dim V - e>) |Gr_e(V)| X^(-B~ e - *dim V),
//! ```
//!
//! where `e` runs over dimension vectors of subrepresentations, `<.,.>` is
//! the Euler form and `*` the right adjoint of the root-lattice inclusion.
//! The non-initial cluster variables produced by mutation are exactly the
//! characters of the indecomposable rigid representations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{BigInt, BigRational, One, Zero};

use crate::cartan::{DimVector, ValuedQuiver};
use crate::coeff::{LaurentScalar, Scalar, ScalarFraction, SqrtQScalar};
use crate::finrep::{
    interpolate_count, is_rigid, rep_classes_up_to, rigid_rep, subrep_count, FieldTower,
    QuiverRep, RepClass,
};
use crate::qtorus::{compatibility_check, exact_div_right, torus_mul, CommutationForm, TorusElt};

fn unit_vec(len: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0i64; len];
    v[j] = 1;
    v
}

/// `Some(e)` when the scalar is exactly `v^(e/2)`.
fn pure_v_half_exp(c: &ScalarFraction) -> Option<i64> {
    let l = c.as_laurent()?;
    let mut terms = l.iter_terms();
    let (e, coeff) = terms.next()?;
    if terms.next().is_some() || !coeff.is_one() {
        return None;
    }
    Some(e)
}

/// The exponent `E` with `x y = v^(E/2) y x`, when the two elements
/// quasi-commute in the torus with the given form; an error otherwise.
pub fn quasi_commutation_half(
    form: &CommutationForm,
    x: &TorusElt<ScalarFraction>,
    y: &TorusElt<ScalarFraction>,
) -> Result<i64, String> {
    let p = torus_mul(form, x, y)?;
    let r = torus_mul(form, y, x)?;
    if p.is_zero() || r.is_zero() {
        return if p.is_zero() && r.is_zero() {
            Ok(0)
        } else {
            Err("exactly one of the two products vanishes".to_string())
        };
    }
    let (pa, pc) = p.leading().expect("nonzero element has a leading term");
    let (ra, rc) = r.leading().expect("nonzero element has a leading term");
    if pa != ra {
        return Err("the two products have different leading exponents".to_string());
    }
    let inv = rc.invert().expect("a leading coefficient is nonzero");
    let e = pure_v_half_exp(&pc.mul(&inv))
        .ok_or_else(|| "the leading coefficients differ by more than a power of v".to_string())?;
    if p == r.mul_v_half_pow(e) {
        Ok(e)
    } else {
        Err("the two elements do not quasi-commute".to_string())
    }
}

/// A quantum seed.  `btilde` has one row per variable and one column per
/// mutable variable; `two_lambda` is the skew matrix `2L` of the commutation
/// form of the current cluster; `d` lists the symmetrizers of the mutable
/// part.  The cluster variables are elements of the ambient quantum torus,
/// written in the exponent coordinates of the initial cluster.
#[derive(Clone, Debug)]
pub struct Seed {
    btilde: Vec<Vec<i64>>,
    two_lambda: Vec<Vec<i64>>,
    d: Vec<i64>,
    cluster: Vec<TorusElt<ScalarFraction>>,
    ambient: CommutationForm,
}

impl Seed {
    /// Validate and build the initial seed on the given data.  The cluster
    /// starts as the torus generators themselves.
    pub fn new(
        btilde: Vec<Vec<i64>>,
        two_lambda: Vec<Vec<i64>>,
        d: Vec<i64>,
    ) -> Result<Seed, String> {
        let nvars = btilde.len();
        let nmut = d.len();
        if nmut == 0 || nmut > nvars {
            return Err(format!(
                "{} mutable variables among {} total is not a valid seed shape",
                nmut, nvars
            ));
        }
        if let Some((i, row)) = btilde.iter().enumerate().find(|(_, r)| r.len() != nmut) {
            return Err(format!(
                "exchange matrix row {} has length {}, expected {}",
                i,
                row.len(),
                nmut
            ));
        }
        if let Some((i, &di)) = d.iter().enumerate().find(|(_, &x)| x < 1) {
            return Err(format!("symmetrizer d[{}] = {} is not positive", i, di));
        }
        for i in 0..nmut {
            for j in 0..nmut {
                if d[i] * btilde[i][j] != -d[j] * btilde[j][i] {
                    return Err(format!(
                        "the principal part is not skew-symmetrizable at ({}, {})",
                        i, j
                    ));
                }
            }
        }
        let ambient = CommutationForm::torus_form(&two_lambda)?;
        if ambient.size() != nvars {
            return Err(format!(
                "the commutation form has {} variables, the exchange matrix {}",
                ambient.size(),
                nvars
            ));
        }
        if !compatibility_check(&btilde, &two_lambda, &d) {
            return Err("the exchange matrix and the commutation form are not compatible".to_string());
        }
        let cluster = (0..nvars)
            .map(|j| TorusElt::from_term(unit_vec(nvars, j), ScalarFraction::one()))
            .collect();
        Ok(Seed { btilde, two_lambda, d, cluster, ambient })
    }

    pub fn num_vars(&self) -> usize {
        self.btilde.len()
    }

    pub fn num_mutable(&self) -> usize {
        self.d.len()
    }

    pub fn btilde(&self) -> &[Vec<i64>] {
        &self.btilde
    }

    pub fn two_lambda(&self) -> &[Vec<i64>] {
        &self.two_lambda
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    pub fn variables(&self) -> &[TorusElt<ScalarFraction>] {
        &self.cluster
    }

    pub fn variable(&self, k: usize) -> &TorusElt<ScalarFraction> {
        &self.cluster[k]
    }

    /// The commutation form of the ambient torus (the initial cluster's
    /// form); all stored variables multiply through this form.
    pub fn ambient_form(&self) -> &CommutationForm {
        &self.ambient
    }
}

/// Mutate the seed in direction `k`.  The exchanged variable is produced by
/// exact division in the ambient torus, the exchange matrix follows the
/// matrix mutation rule, and the commutation data of the new cluster is
/// recomputed from the quasi-commutation of the actual variables and checked
/// for compatibility.
pub fn mutate(seed: &Seed, k: usize) -> Result<Seed, String> {
    let nvars = seed.num_vars();
    let nmut = seed.num_mutable();
    if k >= nmut {
        return Err(format!(
            "cannot mutate in direction {}: only {} variables are mutable",
            k, nmut
        ));
    }
    let tl = &seed.two_lambda;
    // For each sign, with m = b(sign) - e_k in current-cluster coordinates,
    //     M(m) X_k = v^((pre + swap)/2) prod_{i != k, ascending} X_i^(m_i),
    // where pre = sum_{a<b} m_a m_b 2L[b][a] is the bar prefactor of M(m)
    // and swap = 2 sum_{i>k} m_i 2L[i][k]/2 accounts for cancelling X_k^(-1)
    // at slot k against X_k on the far right.
    let mut f: TorusElt<ScalarFraction> = TorusElt::zero();
    for sign in [1i64, -1] {
        let mut m = vec![0i64; nvars];
        for i in 0..nvars {
            m[i] = (sign * seed.btilde[i][k]).max(0);
        }
        m[k] = -1;
        let mut half_exp = 0i64;
        for b in 0..nvars {
            for a in 0..b {
                half_exp += m[a] * m[b] * tl[b][a];
            }
        }
        for i in (k + 1)..nvars {
            half_exp += 2 * m[i] * tl[i][k];
        }
        let mut term = TorusElt::unit(nvars);
        for i in 0..nvars {
            if i == k {
                continue;
            }
            for _ in 0..m[i] {
                term = torus_mul(&seed.ambient, &term, &seed.cluster[i])?;
            }
        }
        f = f.add(&term.mul_v_half_pow(half_exp));
    }
    let x_new = exact_div_right(&seed.ambient, &f, &seed.cluster[k]).ok_or_else(|| {
        format!("the exchange relation in direction {} did not divide exactly", k)
    })?;

    let mut btilde = vec![vec![0i64; nmut]; nvars];
    for i in 0..nvars {
        for j in 0..nmut {
            btilde[i][j] = if i == k || j == k {
                -seed.btilde[i][j]
            } else {
                seed.btilde[i][j]
                    + seed.btilde[i][k].max(0) * seed.btilde[k][j]
                    + seed.btilde[i][k] * (-seed.btilde[k][j]).max(0)
            };
        }
    }

    let mut cluster = seed.cluster.clone();
    cluster[k] = x_new;
    let mut two_lambda = seed.two_lambda.clone();
    two_lambda[k][k] = 0;
    for i in 0..nvars {
        if i == k {
            continue;
        }
        let e = quasi_commutation_half(&seed.ambient, &cluster[i], &cluster[k])
            .map_err(|err| format!("variables {} and {} after mutation: {}", i, k, err))?;
        if e % 2 != 0 {
            return Err(format!(
                "variables {} and {} quasi-commute with the odd exponent {}",
                i, k, e
            ));
        }
        two_lambda[i][k] = e / 2;
        two_lambda[k][i] = -e / 2;
    }
    if !compatibility_check(&btilde, &two_lambda, &seed.d) {
        return Err(format!("mutation in direction {} produced an incompatible seed", k));
    }
    Ok(Seed {
        btilde,
        two_lambda,
        d: seed.d.clone(),
        cluster,
        ambient: seed.ambient.clone(),
    })
}

/// Apply the mutation sequence and report whether every mutable variable
/// stayed a genuine Laurent element (trivial denominators) the whole way.
/// Directions out of range are an error; an exchange relation failing to
/// divide counts as a failure of the Laurent property, not an error.
pub fn laurent_check(seed: &Seed, directions: &[usize]) -> Result<bool, String> {
    if let Some(&bad) = directions.iter().find(|&&k| k >= seed.num_mutable()) {
        return Err(format!(
            "direction {} is out of range: only {} variables are mutable",
            bad,
            seed.num_mutable()
        ));
    }
    let mut current = seed.clone();
    for &k in directions {
        current = match mutate(&current, k) {
            Ok(next) => next,
            Err(_) => return Ok(false),
        };
        if current.cluster[..current.num_mutable()]
            .iter()
            .any(|x| !x.all_coeffs_laurent())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

type VariableKey = Vec<(Vec<i64>, ScalarFraction)>;

fn variable_key(x: &TorusElt<ScalarFraction>) -> VariableKey {
    x.iter().map(|(a, c)| (a.clone(), c.clone())).collect()
}

fn cluster_key(seed: &Seed) -> Vec<VariableKey> {
    let mut key: Vec<VariableKey> = seed.cluster[..seed.num_mutable()]
        .iter()
        .map(variable_key)
        .collect();
    key.sort();
    key
}

/// The result of exhausting the exchange graph from one seed: the number of
/// distinct clusters (compared as unordered multisets of variables) and
/// every distinct mutable variable encountered.
pub struct MutationClosure {
    pub num_clusters: usize,
    pub variables: Vec<TorusElt<ScalarFraction>>,
}

/// Breadth-first closure of the exchange graph, failing once more than
/// `max_clusters` distinct clusters appear.
pub fn mutation_closure(seed: &Seed, max_clusters: usize) -> Result<MutationClosure, String> {
    let mut visited: BTreeSet<Vec<VariableKey>> = BTreeSet::new();
    let mut variables: BTreeMap<VariableKey, TorusElt<ScalarFraction>> = BTreeMap::new();
    let mut queue: VecDeque<Seed> = VecDeque::new();
    visited.insert(cluster_key(seed));
    for x in &seed.cluster[..seed.num_mutable()] {
        variables.insert(variable_key(x), x.clone());
    }
    queue.push_back(seed.clone());
    while let Some(s) = queue.pop_front() {
        for k in 0..s.num_mutable() {
            let next = mutate(&s, k)?;
            if visited.insert(cluster_key(&next)) {
                if visited.len() > max_clusters {
                    return Err(format!(
                        "the exchange graph did not close within {} clusters",
                        max_clusters
                    ));
                }
                for x in &next.cluster[..next.num_mutable()] {
                    let key = variable_key(x);
                    variables.entry(key).or_insert_with(|| x.clone());
                }
                queue.push_back(next);
            }
        }
    }
    Ok(MutationClosure {
        num_clusters: visited.len(),
        variables: variables.into_values().collect(),
    })
}

/// All distinct mutable variables in the exchange-graph closure that do not
/// belong to the starting cluster.
pub fn noninitial_variables(
    seed: &Seed,
    max_clusters: usize,
) -> Result<Vec<TorusElt<ScalarFraction>>, String> {
    let closure = mutation_closure(seed, max_clusters)?;
    let initial: BTreeSet<VariableKey> = seed.cluster[..seed.num_mutable()]
        .iter()
        .map(variable_key)
        .collect();
    Ok(closure
        .variables
        .into_iter()
        .filter(|x| !initial.contains(&variable_key(x)))
        .collect())
}

/// The extended exchange matrix of a valued quiver: the principal part on
/// top (`b_ij > 0` exactly when there are arrows `i -> j`), one frozen row
/// `-e_i` per vertex below.
pub fn extended_exchange_matrix(quiver: &ValuedQuiver) -> Vec<Vec<i64>> {
    let n = quiver.rank();
    let mut btilde = vec![vec![0i64; n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            btilde[i][j] = quiver.b(i, j);
        }
        btilde[n + i][i] = -1;
    }
    btilde
}

/// Exact inverse of a square integer matrix, failing unless the inverse is
/// again integral.
fn invert_integer_matrix(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, String> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(BigInt::from(m[i][j]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| "the matrix is singular".to_string())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..2 * n {
            a[col][j] = &a[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..2 * n {
                    let delta = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &delta;
                }
            }
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = &a[i][n + j];
            if !x.is_integer() {
                return Err("the matrix is not invertible over the integers".to_string());
            }
            out[i][j] = i64::try_from(x.to_integer())
                .map_err(|_| "an inverse entry does not fit in 64 bits".to_string())?;
        }
    }
    Ok(out)
}

/// The bridge between the quasi-commuting polynomial algebra on a doubled
/// adapted word and the quantum torus of the quiver's initial seed: the
/// extended exchange matrix, the transported commutation form, and the
/// lattice isomorphism `phi` realizing the identification.
pub struct CharacterContext {
    quiver: ValuedQuiver,
    word: Vec<usize>,
    btilde: Vec<Vec<i64>>,
    two_lambda: Vec<Vec<i64>>,
    phi: Vec<Vec<i64>>,
    form: CommutationForm,
}

impl CharacterContext {
    /// Validate the word (a complete adapted vertex sequence listed twice)
    /// and build the seed data.  Position `k` of the word, carrying letter
    /// `j`, maps to the torus exponent
    ///
    /// ```text
    ///     phi(e_k) = -B~ alpha_j [k in the second half] - * alpha_j ,
    /// ```
    ///
    /// and the commutation form of the polynomial algebra is pushed forward
    /// through `phi`; the result must be integral and compatible with the
    /// extended exchange matrix, or construction fails.
    pub fn new(quiver: &ValuedQuiver, word: &[usize]) -> Result<Self, String> {
        let n = quiver.rank();
        let m = 2 * n;
        if word.len() != m {
            return Err(format!(
                "the word has length {}, expected {} (twice the rank)",
                word.len(),
                m
            ));
        }
        if word[n..] != word[..n] {
            return Err("the word must list the same vertex sequence twice".to_string());
        }
        let mut seen = vec![false; n];
        for &j in &word[..n] {
            if j >= n {
                return Err(format!("letter {} is not a vertex of the quiver", j));
            }
            if seen[j] {
                return Err(format!("vertex {} repeats within the first half of the word", j));
            }
            seen[j] = true;
        }
        for p in 0..n {
            for t in (p + 1)..n {
                if quiver.arrow_mult(word[t], word[p]) > 0 {
                    return Err(format!(
                        "the sequence is not adapted: the arrow {} -> {} points backwards in it",
                        word[t], word[p]
                    ));
                }
            }
        }
        let btilde = extended_exchange_matrix(quiver);
        let mut phi = vec![vec![0i64; m]; m];
        for k in 0..m {
            let j = word[k];
            let star = quiver.star(&unit_vec(n, j));
            for r in 0..m {
                let mut e = if r < n { -star[r] } else { 0 };
                if k >= n {
                    e -= btilde[r][j];
                }
                phi[r][k] = e;
            }
        }
        let inv = invert_integer_matrix(&phi)
            .map_err(|err| format!("the lattice map of the word is degenerate: {}", err))?;
        let inv_cols: Vec<Vec<i64>> =
            (0..m).map(|r| (0..m).map(|k| inv[k][r]).collect()).collect();
        let poly_form = CommutationForm::polynomial_form(&quiver.cartan(), word);
        let mut two_lambda = vec![vec![0i64; m]; m];
        for r in 0..m {
            for s in 0..m {
                let w = poly_form.skew_pairing(&inv_cols[r], &inv_cols[s]);
                if w % 2 != 0 {
                    return Err("the transported commutation form is not integral".to_string());
                }
                two_lambda[r][s] = w / 2;
            }
        }
        let form = CommutationForm::torus_form(&two_lambda)?;
        if !compatibility_check(&btilde, &two_lambda, quiver.weights()) {
            return Err(
                "the transported form is not compatible with the exchange matrix".to_string()
            );
        }
        Ok(CharacterContext {
            quiver: quiver.clone(),
            word: word.to_vec(),
            btilde,
            two_lambda,
            phi,
            form,
        })
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn btilde(&self) -> &[Vec<i64>] {
        &self.btilde
    }

    pub fn two_lambda(&self) -> &[Vec<i64>] {
        &self.two_lambda
    }

    /// The matrix of the lattice isomorphism, one column per word position.
    pub fn lattice_map(&self) -> &[Vec<i64>] {
        &self.phi
    }

    pub fn form(&self) -> &CommutationForm {
        &self.form
    }

    /// The initial seed of the quiver in this torus.
    pub fn seed(&self) -> Seed {
        Seed::new(
            self.btilde.clone(),
            self.two_lambda.clone(),
            self.quiver.weights().to_vec(),
        )
        .expect("context data is validated at construction")
    }

    /// Transport an element of the quasi-commuting polynomial algebra on the
    /// word into the quantum torus along the lattice isomorphism.  Both
    /// monomial bases are bar-invariant and the commutation forms correspond,
    /// so coefficients carry over unchanged.
    pub fn transport<S: Scalar>(&self, x: &TorusElt<S>) -> TorusElt<S> {
        let m = self.word.len();
        let mut out = TorusElt::zero();
        for (a, c) in x.iter() {
            assert_eq!(a.len(), m, "exponent length mismatch with the word");
            let e: Vec<i64> = (0..m)
                .map(|r| (0..m).map(|k| self.phi[r][k] * a[k]).sum())
                .collect();
            out.add_term(e, c.clone());
        }
        out
    }

    /// The torus exponent `-B~ e - * nu` of one character term.
    fn character_exponent(&self, e: &[i64], nu: &[i64]) -> Vec<i64> {
        let n = self.quiver.rank();
        let star = self.quiver.star(nu);
        (0..2 * n)
            .map(|r| {
                let mut t = -(0..n).map(|j| self.btilde[r][j] * e[j]).sum::<i64>();
                if r < n {
                    t -= star[r];
                }
                t
            })
            .collect()
    }

    /// The quantum cluster character of a representation over a fixed finite
    /// field: `sum_e v^(-<e, dim V - e>) |Gr_e(V)| X^(-B~ e - * dim V)`.
    pub fn character_at(&self, tower: &FieldTower, v: &QuiverRep) -> TorusElt<SqrtQScalar> {
        let n = self.quiver.rank();
        let nu = v.dims().clone();
        let mut out = TorusElt::zero();
        let mut e = vec![0i64; n];
        'subdims: loop {
            let count = subrep_count(tower, v, &e);
            if count != 0 {
                let rest: Vec<i64> = nu.iter().zip(&e).map(|(a, b)| a - b).collect();
                let quarter = -2 * self.quiver.euler_form(&e, &rest);
                let c = SqrtQScalar::q_quarter_pow(tower.q(), quarter)
                    .scale_int(&BigInt::from(count));
                out.add_term(self.character_exponent(&e, &nu), c);
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'subdims;
                }
                if e[pos] < nu[pos] {
                    e[pos] += 1;
                    break;
                }
                e[pos] = 0;
                pos += 1;
            }
        }
        out
    }

    /// The quantum cluster character of the rigid representation with the
    /// given dimension vector, with every subrepresentation count
    /// interpolated to an exact polynomial in the field size.  Fails when
    /// some field admits no rigid representation of this dimension or a
    /// count is not polynomial within the Grassmannian degree bound.
    pub fn character_symbolic(&self, nu: &[i64]) -> Result<TorusElt<ScalarFraction>, String> {
        let n = self.quiver.rank();
        if nu.len() != n {
            return Err(format!(
                "dimension vector has length {}, the quiver has rank {}",
                nu.len(),
                n
            ));
        }
        if nu.iter().any(|&x| x < 0) {
            return Err(format!("dimension vector {:?} has a negative entry", nu));
        }
        let mut out = TorusElt::zero();
        let mut e = vec![0i64; n];
        'subdims: loop {
            let rest: Vec<i64> = nu.iter().zip(&e).map(|(a, b)| a - b).collect();
            // The subrepresentations of type e form a closed subvariety of
            // the product of vertex Grassmannians, whose dimension bounds
            // the degree of the counting polynomial.
            let bound: i64 = (0..n)
                .map(|i| self.quiver.weights()[i] * e[i] * rest[i])
                .sum();
            let mut first_error: Option<String> = None;
            let mut counter = |q: u64| -> BigInt {
                if first_error.is_some() {
                    return BigInt::zero();
                }
                let counted = FieldTower::for_quiver(&self.quiver, q)
                    .and_then(|tower| {
                        rigid_rep(&tower, &self.quiver, nu).map(|v| (tower, v))
                    })
                    .map(|(tower, v)| subrep_count(&tower, &v, &e));
                match counted {
                    Ok(c) => BigInt::from(c),
                    Err(err) => {
                        first_error = Some(err);
                        BigInt::zero()
                    }
                }
            };
            let poly = interpolate_count(&mut counter, bound as usize);
            if let Some(err) = first_error {
                return Err(format!("dimension vector {:?}: {}", nu, err));
            }
            let poly =
                poly.map_err(|err| format!("subrepresentations of type {:?}: {}", e, err))?;
            let quarter = -2 * self.quiver.euler_form(&e, &rest);
            let c = ScalarFraction::from_laurent(
                LaurentScalar::from_q_poly(poly.coeffs()).mul_v_half_pow(quarter),
            );
            out.add_term(self.character_exponent(&e, nu), c);
            let mut pos = 0;
            loop {
                if pos == n {
                    break 'subdims;
                }
                if e[pos] < nu[pos] {
                    e[pos] += 1;
                    break;
                }
                e[pos] = 0;
                pos += 1;
            }
        }
        Ok(out)
    }
}

/// Dimension vectors of total weighted dimension at most `max_total` that
/// carry an indecomposable rigid representation, in sorted order.  A class
/// is decomposable exactly when it is the direct sum of two smaller nonzero
/// classes, which is checked exhaustively.
pub fn indecomposable_rigid_dims(
    tower: &FieldTower,
    quiver: &ValuedQuiver,
    max_total: i64,
) -> Vec<DimVector> {
    let classes = rep_classes_up_to(tower, quiver, max_total);
    let mut out = Vec::new();
    for c in &classes {
        if c.total_dim() == 0 || !is_rigid(tower, c.rep()) {
            continue;
        }
        let mut decomposable = false;
        'split: for a in &classes {
            if a.total_dim() == 0 || a.total_dim() >= c.total_dim() {
                continue;
            }
            for b in &classes {
                if b.total_dim() == 0 {
                    continue;
                }
                let sum: Vec<i64> =
                    a.dims().iter().zip(b.dims()).map(|(x, y)| x + y).collect();
                if &sum != c.dims() {
                    continue;
                }
                if RepClass::new(tower, &a.rep().direct_sum(b.rep())) == *c {
                    decomposable = true;
                    break 'split;
                }
            }
        }
        if !decomposable {
            out.push(c.dims().clone());
        }
    }
    out.sort();
    out.dedup();
    out
}
