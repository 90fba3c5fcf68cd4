//! Feigin homomorphisms.
//!
//! For a fixed word `i = (i_1, ..., i_m)` in the vertex alphabet, the map
//! `psi_bar` sends a shuffle word `j` to the sum, over all ways of writing
//! `j` as the in-order concatenation `i_1^(a_1) ... i_m^(a_m)`, of the
//! bar-invariant monomial `t^a` divided by the balanced factorials
//! `[a_1]!_(i_1) ... [a_m]!_(i_m)`.  It is an algebra homomorphism onto the
//! quantum polynomial ring of `i`.
//!
//! The classical Feigin map on the quantized coordinate ring factors
//! through the shuffle algebra: generators embed via `kappa` (`x_i` goes to
//! the one-letter word `(i)`, divided powers to repeated words), and
//! `psi_bar` finishes the job.

use crate::cartan::CartanData;
use crate::coeff::{bar_qfact_in, Scalar};
use crate::qtorus::TorusElt;
use crate::shuffle::{divided_power, shuffle_mul, ShuffleElt, Word};

/// All exponent vectors `a` with `i_1^(a_1) ... i_m^(a_m)` equal to
/// `target` (concatenating `a_k` copies of `i_k`, in order).
fn decompositions(i_word: &[usize], target: &[usize]) -> Vec<Vec<i64>> {
    fn go(
        i_word: &[usize],
        target: &[usize],
        k: usize,
        pos: usize,
        a: &mut [i64],
        out: &mut Vec<Vec<i64>>,
    ) {
        if k == i_word.len() {
            if pos == target.len() {
                out.push(a.to_vec());
            }
            return;
        }
        let mut run = 0usize;
        loop {
            a[k] = run as i64;
            go(i_word, target, k + 1, pos + run, a, out);
            if pos + run < target.len() && target[pos + run] == i_word[k] {
                run += 1;
            } else {
                break;
            }
        }
    }
    let mut out = Vec::new();
    let mut a = vec![0i64; i_word.len()];
    go(i_word, target, 0, 0, &mut a, &mut out);
    out
}

/// The homomorphism into the quantum polynomial ring of `i_word`: each
/// shuffle word contributes one monomial per decomposition along `i_word`,
/// weighted by inverse balanced factorials.
pub fn psi_bar<S: Scalar>(
    cartan: &CartanData,
    i_word: &[usize],
    x: &ShuffleElt<S>,
) -> TorusElt<S> {
    let mut out = TorusElt::zero();
    for (w, c) in x.iter() {
        for a in decompositions(i_word, w.letters()) {
            let mut coef = c.clone();
            for (k, &ak) in a.iter().enumerate() {
                if ak > 1 {
                    let d = cartan.symmetrizer(i_word[k]) as u32;
                    let fact = bar_qfact_in(c, ak as u32, d);
                    coef = coef.mul(&fact.invert().expect("balanced factorial is invertible"));
                }
            }
            out.add_term(a, coef);
        }
    }
    out
}

/// The embedding of the quantized coordinate ring into the shuffle
/// algebra: a product of divided-power generators `x_i^[r]`, given as
/// `(i, r)` pairs, evaluates to the shuffle product of divided powers of
/// one-letter words.  `ctx` fixes the coefficient context (pass `one` for
/// formal coefficients).
pub fn kappa<S: Scalar>(
    cartan: &CartanData,
    expression: &[(usize, u32)],
    ctx: &S,
) -> ShuffleElt<S> {
    let mut out = ShuffleElt::from_term(Word::empty(), ctx.v_half_pow_like(0));
    for &(i, r) in expression {
        out = shuffle_mul(cartan, &out, &divided_power(cartan, i, r as usize, ctx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::test_quivers;
    use crate::coeff::{bar_qfact, LaurentScalar, ScalarFraction};
    use crate::qtorus::{torus_mul, CommutationForm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one() -> ScalarFraction {
        ScalarFraction::one()
    }

    fn unit_exp(m: usize, k: usize) -> Vec<i64> {
        let mut a = vec![0i64; m];
        a[k] = 1;
        a
    }

    fn random_elt(
        rng: &mut ChaCha8Rng,
        rank: usize,
        max_len: usize,
        terms: usize,
    ) -> ShuffleElt<ScalarFraction> {
        let mut out = ShuffleElt::zero();
        for _ in 0..terms {
            let len = rng.gen_range(1..=max_len);
            let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..rank)).collect();
            let c = LaurentScalar::monomial(
                rng.gen_range(-2..=2),
                num::BigInt::from(rng.gen_range(1..=3)),
            );
            out.add_term(Word::new(letters), ScalarFraction::from_laurent(c));
        }
        out
    }

    #[test]
    fn images_of_single_letters_collect_matching_positions() {
        let c = test_quivers::b2().cartan();
        let i_word = [0usize, 1, 0, 1];
        for j in 0..2 {
            let image = psi_bar(&c, &i_word, &ShuffleElt::from_term(Word::single(j), one()));
            let mut expected = TorusElt::zero();
            for (k, &ik) in i_word.iter().enumerate() {
                if ik == j {
                    expected.add_term(unit_exp(4, k), one());
                }
            }
            assert_eq!(image, expected);
        }
        // A letter that never occurs in the word has no decompositions.
        let c3 = test_quivers::a3().cartan();
        let image = psi_bar(&c3, &i_word, &ShuffleElt::from_term(Word::single(2), one()));
        assert!(image.is_zero());
    }

    #[test]
    fn repeated_letter_images_divide_by_balanced_factorials() {
        // psi_bar over the word (i,i) sends the two-letter word (i,i) to
        // t^(2,0)/[2]! + t^(1,1) + t^(0,2)/[2]!, with the balanced
        // factorial taken at the symmetrizer of i.
        for (quiver, i) in [(test_quivers::a2(), 0usize), (test_quivers::b2(), 1)] {
            let c = quiver.cartan();
            let d = c.symmetrizer(i) as u32;
            let x = ShuffleElt::from_term(Word::new(vec![i, i]), one());
            let image = psi_bar(&c, &[i, i], &x);
            let inv2 = ScalarFraction::from_laurent(bar_qfact(2, d)).invert().unwrap();
            let mut expected = TorusElt::zero();
            expected.add_term(vec![2, 0], inv2.clone());
            expected.add_term(vec![1, 1], one());
            expected.add_term(vec![0, 2], inv2);
            assert_eq!(image, expected);
        }
    }

    #[test]
    fn images_multiply_like_the_shuffle_product() {
        let i_word = [0usize, 1, 0, 1];
        for quiver in [test_quivers::a2(), test_quivers::b2()] {
            let c = quiver.cartan();
            let form = CommutationForm::polynomial_form(&c, &i_word);
            let mut rng = ChaCha8Rng::seed_from_u64(53);
            for _ in 0..30 {
                let a = random_elt(&mut rng, 2, 3, 2);
                let b = random_elt(&mut rng, 2, 3, 2);
                let lhs = psi_bar(&c, &i_word, &shuffle_mul(&c, &a, &b));
                let rhs = torus_mul(&form, &psi_bar(&c, &i_word, &a), &psi_bar(&c, &i_word, &b))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn single_word_images_are_bar_invariant() {
        let i_word = [0usize, 1, 0, 1];
        for quiver in [test_quivers::a2(), test_quivers::b2()] {
            let c = quiver.cartan();
            // Every word of length <= 3 over the two-letter alphabet.
            for len in 0..=3usize {
                for code in 0..(1usize << len) {
                    let letters: Vec<usize> = (0..len).map(|t| (code >> t) & 1).collect();
                    let image =
                        psi_bar(&c, &i_word, &ShuffleElt::from_term(Word::new(letters), one()));
                    assert_eq!(image.bar(), image);
                }
            }
        }
    }

    #[test]
    fn the_embedding_sends_generators_to_letters() {
        let c = test_quivers::g2().cartan();
        for i in 0..2 {
            assert_eq!(
                kappa(&c, &[(i, 1)], &one()),
                ShuffleElt::from_term(Word::single(i), one())
            );
            for r in 2..=3u32 {
                assert_eq!(
                    kappa(&c, &[(i, r)], &one()),
                    ShuffleElt::from_term(Word::repeated(i, r as usize), one())
                );
            }
        }
        // A two-generator product is the shuffle product of the letters.
        assert_eq!(
            kappa(&c, &[(0, 1), (1, 1)], &one()),
            shuffle_mul(
                &c,
                &ShuffleElt::from_term(Word::single(0), one()),
                &ShuffleElt::from_term(Word::single(1), one())
            )
        );
    }

    #[test]
    fn divided_serre_expressions_vanish_under_the_embedding() {
        for quiver in [test_quivers::a2(), test_quivers::b2(), test_quivers::g2()] {
            let c = quiver.cartan();
            for i in 0..c.rank() {
                for j in 0..c.rank() {
                    if i == j {
                        continue;
                    }
                    let n = (1 - c.entry(i, j)) as u32;
                    let mut total = ShuffleElt::zero();
                    for r in 0..=n {
                        let term = kappa(&c, &[(i, r), (j, 1), (i, n - r)], &one());
                        if r % 2 == 0 {
                            total = total.add(&term);
                        } else {
                            total = total.sub(&term);
                        }
                    }
                    assert!(total.is_zero(), "i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn classical_images_factor_through_the_shuffle_algebra() {
        // The classical map sends x_j to the sum of the variables at
        // positions where the word reads j; composing the embedding with
        // psi_bar reproduces it, on generators and on products.
        let i_word = [0usize, 1, 0, 1];
        for quiver in [test_quivers::a2(), test_quivers::b2()] {
            let c = quiver.cartan();
            let form = CommutationForm::polynomial_form(&c, &i_word);
            let classical = |j: usize| {
                let mut out = TorusElt::zero();
                for (k, &ik) in i_word.iter().enumerate() {
                    if ik == j {
                        out.add_term(unit_exp(4, k), one());
                    }
                }
                out
            };
            for j in 0..2 {
                assert_eq!(psi_bar(&c, &i_word, &kappa(&c, &[(j, 1)], &one())), classical(j));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(59);
            for _ in 0..20 {
                let gens: Vec<(usize, u32)> =
                    (0..rng.gen_range(1..=3)).map(|_| (rng.gen_range(0..2), 1)).collect();
                let via_shuffle = psi_bar(&c, &i_word, &kappa(&c, &gens, &one()));
                let mut direct = TorusElt::unit(4);
                for &(j, _) in &gens {
                    direct = torus_mul(&form, &direct, &classical(j)).unwrap();
                }
                assert_eq!(via_shuffle, direct);
            }
        }
    }
}
