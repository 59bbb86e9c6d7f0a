#![allow(dead_code)]

use bipmatch::feasibility_precheck;
use bipmatch::gen::{EdgeModel, GenSpec, WeightModel};
use bipmatch::WeightedBipartiteGraph;
use rand::Rng;

pub const EDGE_MODELS: [EdgeModel; 2] = [EdgeModel::ErdosRenyi, EdgeModel::DispersedDegree];
pub const WEIGHT_MODELS: [WeightModel; 3] = [
    WeightModel::Uniform,
    WeightModel::UniformLowHigh,
    WeightModel::LowOrHigh,
];

/// Generator parameters for one of the six model combinations (`combo`
/// taken mod 6), with density, radius and low-part probability drawn
/// from `rng`.
pub fn random_spec(rng: &mut impl Rng, combo: usize, n: usize, s: usize) -> GenSpec {
    GenSpec {
        model: EDGE_MODELS[combo % 2],
        n,
        s,
        d: rng.gen_range(0.35..=1.0),
        r_norm: rng.gen_range(0.0..=1.0),
        weight_model: WEIGHT_MODELS[(combo / 2) % 3],
        p_low: rng.gen_range(0.0..=1.0),
        seed: rng.gen(),
    }
}

/// Redraws until the instance admits a matching covering every right
/// vertex.
pub fn feasible_instance(
    rng: &mut impl Rng,
    combo: usize,
    n: usize,
    s: usize,
) -> (GenSpec, WeightedBipartiteGraph) {
    loop {
        let spec = random_spec(rng, combo, n, s);
        let g = spec.generate().expect("valid generator parameters");
        if feasibility_precheck(&g) {
            return (spec, g);
        }
    }
}

/// Weights in `-range..=range` on explicit edges, for hand-built cases.
pub fn random_weights(rng: &mut impl Rng, pairs: &[(usize, usize)], range: i64) -> Vec<(usize, usize, i64)> {
    pairs
        .iter()
        .map(|&(u, v)| (u, v, rng.gen_range(-range..=range)))
        .collect()
}
