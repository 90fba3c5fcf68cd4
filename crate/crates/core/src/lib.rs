//! Exact computational algebra connecting four families of quantum algebras:
//! quantum shuffle algebras, quantum polynomial/torus algebras, dual Hall
//! algebras of valued quivers over finite fields, and acyclic quantum cluster
//! algebras.
//!
//! Everything is exact: coefficients are integer Laurent polynomials in
//! `v^(1/2)` (or their fractions), and fixed-field computations take values in
//! the ring generated over `Q` by a fourth root of the field size.  No
//! floating point is used anywhere.
//!
//! Module overview:
//!
//! * [`coeff`] — scalar rings: Laurent polynomials in `v^(1/2)`, reduced
//!   fractions, fixed-`q` values, and `q`-binomial combinatorics.
//! * [`cartan`] — symmetrizable Cartan data, valued quivers, root-lattice
//!   forms (symmetric and Euler) and simple reflections.
//! * [`shuffle`] — the quantum shuffle algebra on words, its twisted
//!   bialgebra structure and derivations.
//! * [`qtorus`] — quasi-commuting variable algebras: quantum polynomial
//!   rings attached to words and based quantum tori.
//! * [`feigin`] — the Feigin homomorphism from words to quasi-commuting
//!   polynomials, and the embedding of a quantized coordinate ring into the
//!   shuffle algebra.
//! * [`finrep`] — representations of valued quivers over finite fields:
//!   subrepresentation/flag counting, isomorphism classes, automorphism
//!   counts, rigidity, and counting polynomials via exact interpolation.
//! * [`hall`] — the (dual) Hall algebra of a valued quiver: products,
//!   coproducts, the shuffle character, and quantum characters of
//!   representations.
//! * [`cluster`] — quantum seeds, mutation, the exact Laurent property, and
//!   quantum cluster characters.

pub mod cartan;
pub mod cluster;
pub mod coeff;
pub mod feigin;
pub mod finrep;
pub mod hall;
pub mod qtorus;
pub mod shuffle;
