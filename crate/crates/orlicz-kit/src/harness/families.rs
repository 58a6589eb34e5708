//! Deterministic test-function families used by the verification suites.

use crate::gridfn::GridFunction;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct FamilyMember {
    /// the family parameter (dilation scale, translation offset or index)
    pub label: f64,
    pub f: GridFunction,
}

/// Generators for the spec'd families. Members are deterministic given the
/// seed and compactly supported on their working grids.
#[derive(Clone, Debug)]
pub enum TestFamily {
    /// χ_{[0,λ]} for λ = 2^k, k in [lo_exp, hi_exp]; grid resolves λ/cells
    DilatedChi {
        lo_exp: i32,
        hi_exp: i32,
        cells: usize,
    },
    /// a fixed C⁰ bump translated by multiples of its width
    TranslatedBump { count: usize, cells: usize },
    /// seeded uniform step functions on [0,1]
    RandomStep {
        seed: u64,
        count: usize,
        cells: usize,
    },
}

impl TestFamily {
    pub fn members(&self) -> Result<Vec<FamilyMember>> {
        match self {
            TestFamily::DilatedChi {
                lo_exp,
                hi_exp,
                cells,
            } => {
                if hi_exp < lo_exp || *cells == 0 {
                    return Err(Error::invalid("dilated-chi: empty family"));
                }
                (*lo_exp..=*hi_exp)
                    .map(|k| {
                        let lambda = 2f64.powi(k);
                        let f = GridFunction::chi_interval(0.0, lambda, lambda / *cells as f64)?;
                        Ok(FamilyMember { label: lambda, f })
                    })
                    .collect()
            }
            TestFamily::TranslatedBump { count, cells } => {
                if *count == 0 || *cells == 0 {
                    return Err(Error::invalid("translated-bump: empty family"));
                }
                (0..*count)
                    .map(|i| {
                        let tau = i as f64 * 1.5;
                        let f = GridFunction::from_fn_1d(tau, tau + 1.0, *cells, move |x| {
                            let u = 2.0 * (x - tau) - 1.0;
                            (1.0 - u * u).max(0.0).powi(2)
                        })?;
                        Ok(FamilyMember { label: tau, f })
                    })
                    .collect()
            }
            TestFamily::RandomStep { seed, count, cells } => {
                if *count == 0 || *cells == 0 {
                    return Err(Error::invalid("random-step: empty family"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count)
                    .map(|i| {
                        let values: Vec<f64> =
                            (0..*cells).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                        let f = GridFunction::new_1d(0.0, 1.0 / *cells as f64, values)?;
                        Ok(FamilyMember {
                            label: i as f64,
                            f,
                        })
                    })
                    .collect()
            }
        }
    }
}

/// Random step functions aligned to the dyadic grid: h = 2^{-m}, origin 0,
/// nonnegative dyadic-rational values (the good-lambda suite's input class).
pub fn random_dyadic_steps(seed: u64, count: usize, m: u32) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = 1usize << m;
    (0..count)
        .map(|_| {
            let values: Vec<f64> = (0..cells)
                .map(|_| {
                    if rng.gen_bool(0.35) {
                        (rng.gen_range(1..=64) as f64) / 8.0
                    } else {
                        0.0
                    }
                })
                .collect();
            GridFunction::new_1d(0.0, 2f64.powi(-(m as i32)), values).expect("dyadic grid")
        })
        .collect()
}
