use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Coeff;
use super::ratfn::RationalFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqMode {
    Exact,
    /// Compare values at `trials` random rational points drawn from a stream
    /// seeded by `seed`.
    Randomized { seed: u64, trials: u32 },
}

const SAMPLE_BOUND: i64 = 1 << 20;
const MAX_RETRIES: u32 = 64;
const SLOTS: usize = 2 + super::MAX_RANK + super::MAX_AUX;

/// Equality of rational functions.
///
/// Exact mode is sound and complete. Randomized mode can only err by calling
/// unequal functions equal; points where either denominator vanishes are
/// skipped and redrawn.
pub fn eq(f: &RationalFn, g: &RationalFn, mode: EqMode) -> bool {
    match mode {
        EqMode::Exact => f.eq_exact(g),
        EqMode::Randomized { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut done = 0;
            let mut misses = 0;
            while done < trials {
                let point = random_point(&mut rng);
                match (f.eval(&point), g.eval(&point)) {
                    (Some(a), Some(b)) => {
                        if a != b {
                            return false;
                        }
                        done += 1;
                    }
                    _ => {
                        misses += 1;
                        if misses > MAX_RETRIES {
                            // Every draw hit a pole; fall back to the exact test.
                            return f.eq_exact(g);
                        }
                    }
                }
            }
            true
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> Vec<Coeff> {
    (0..SLOTS)
        .map(|_| {
            let mut n = 0;
            while n == 0 {
                n = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
            }
            let d = rng.gen_range(1..=SAMPLE_BOUND);
            Coeff::new(BigInt::from(n), BigInt::from(d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_ratfn;

    #[test]
    fn modes_agree_on_examples() {
        let a = parse_ratfn("(1-q1^2)/(1-q1)").unwrap();
        let b = parse_ratfn("1+q1").unwrap();
        let c = parse_ratfn("q2").unwrap();
        let r = EqMode::Randomized { seed: 7, trials: 3 };
        assert!(eq(&a, &b, EqMode::Exact));
        assert!(eq(&a, &b, r));
        assert!(!eq(&b, &c, EqMode::Exact));
        assert!(!eq(&b, &c, r));
    }

    #[test]
    fn half_powers_evaluate() {
        let a = parse_ratfn("q1^(1/2)*q1^(1/2)").unwrap();
        let b = parse_ratfn("q1").unwrap();
        assert!(eq(&a, &b, EqMode::Randomized { seed: 1, trials: 2 }));
    }
}
