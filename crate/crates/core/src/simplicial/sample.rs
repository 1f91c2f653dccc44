use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Complex, Scalar};

/// A point together with the simplex it was drawn from, whose relative
/// interior contains it.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint<S> {
    pub point: Vec<S>,
    pub carrier: usize,
}

/// For every simplex, its barycenter followed by `per_simplex − 1` points with
/// random positive integer weights in `1..=1000`, in canonical simplex order.
pub fn sample_points<S: Scalar>(k: &Complex<S>, per_simplex: usize, seed: u64) -> Vec<SamplePoint<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(k.len() * per_simplex);
    for s in 0..k.len() {
        if per_simplex == 0 {
            break;
        }
        out.push(SamplePoint { point: k.barycenter(s), carrier: s });
        for _ in 1..per_simplex {
            let weights: Vec<S> = (0..k.simplex(s).len())
                .map(|_| S::from_u32(rng.gen_range(1..=1000)).expect("small integer"))
                .collect();
            out.push(SamplePoint { point: k.combination(s, &weights), carrier: s });
        }
    }
    out
}
