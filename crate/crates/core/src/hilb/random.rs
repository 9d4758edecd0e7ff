use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::diagram::{Diagram, Generator, NodeId, Obj, Source, Target, WireType};

use super::{c, ComplexTensor, C64};

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Seeded matrix with independent complex Gaussian entries.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| gaussian(&mut rng)).collect();
    ComplexTensor::new(vec![rows, cols], data).expect("gaussian entries are finite")
}

/// Seeded unitary from Gram-Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexTensor {
    assert!(dim >= 1, "dimension must be positive");
    let g = random_matrix(dim, dim, seed);
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|j| (0..dim).map(|i| g.get(&[i, j])).collect()).collect();
    for j in 0..dim {
        // two passes keep the result orthonormal to machine precision
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (x, v) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * v;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    let mut u = ComplexTensor::zeros(vec![dim, dim]);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u.set(&[i, j], *z);
        }
    }
    u
}

/// Controls for [`random_diagram`]. `weights` is the generator-frequency
/// table; each entry is a template placed verbatim.
#[derive(Clone, Debug)]
pub struct RandomDiagramParams {
    pub weights: Vec<(Generator, u32)>,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub max_boundary: usize,
    pub connected: bool,
}

impl RandomDiagramParams {
    /// Basis-structure generators over one object.
    pub fn basis(object: impl Into<Obj>) -> Self {
        let o: Obj = object.into();
        let weights = vec![
            (Generator::Delta(o.clone()), 4),
            (Generator::DeltaDagger(o.clone()), 4),
            (Generator::Gamma(o.clone()), 1),
            (Generator::GammaDagger(o.clone()), 1),
            (Generator::Dualiser(o.clone()), 2),
            (Generator::DualiserDagger(o.clone()), 2),
            (Generator::Cap(o.clone()), 2),
            (Generator::Cup(o), 2),
        ];
        RandomDiagramParams { weights, min_nodes: 1, max_nodes: 8, max_boundary: 6, connected: true }
    }

    pub fn with_generator(mut self, g: Generator, weight: u32) -> Self {
        self.weights.push((g, weight));
        self
    }

    pub fn nodes(mut self, min: usize, max: usize) -> Self {
        self.min_nodes = min;
        self.max_nodes = max;
        self
    }

    pub fn connected(mut self, connected: bool) -> Self {
        self.connected = connected;
        self
    }

    pub fn max_boundary(mut self, n: usize) -> Self {
        self.max_boundary = n;
        self
    }
}

const ATTEMPTS: u64 = 10_000;

/// Seeded random diagram. Generators are stacked bottom to top; each input
/// is fed from a random open wire of the right type, or from a fresh
/// boundary input when none is open. Remaining open wires become outputs in
/// shuffled order. Draws are repeated until the connectivity and boundary
/// constraints hold.
pub fn random_diagram(params: &RandomDiagramParams, seed: u64) -> Diagram {
    assert!(!params.weights.is_empty(), "empty generator table");
    assert!(params.min_nodes <= params.max_nodes);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if let Some(d) = attempt(params, &mut rng) {
            return d;
        }
    }
    panic!("no diagram satisfies the requested constraints");
}

fn attempt(params: &RandomDiagramParams, rng: &mut ChaCha8Rng) -> Option<Diagram> {
    let total: u32 = params.weights.iter().map(|(_, w)| w).sum();
    let target = rng.random_range(params.min_nodes..=params.max_nodes);
    let mut inputs: Vec<WireType> = Vec::new();
    let mut open: Vec<(Source, WireType)> = Vec::new();
    let mut nodes: Vec<(NodeId, Generator)> = Vec::new();
    let mut wires: Vec<(Source, Target)> = Vec::new();
    while nodes.len() < target {
        let mut pick = rng.random_range(0..total);
        let g = params
            .weights
            .iter()
            .find(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .map(|(g, _)| g.clone())
            .expect("pick below total");
        let id = NodeId(nodes.len() as u32);
        let (ins, outs) = g.signature();
        for (k, t) in ins.iter().enumerate() {
            let candidates: Vec<usize> = (0..open.len()).filter(|&i| open[i].1 == *t).collect();
            // sometimes prefer a fresh input even when a wire is available
            let fresh = candidates.is_empty() || rng.random_bool(0.15);
            let src = if fresh {
                inputs.push(t.clone());
                Source::Input(inputs.len() - 1)
            } else {
                let i = candidates[rng.random_range(0..candidates.len())];
                open.remove(i).0
            };
            wires.push((src, Target::Node(id, k)));
        }
        for (j, t) in outs.into_iter().enumerate() {
            open.push((Source::Node(id, j), t));
        }
        nodes.push((id, g));
    }
    if inputs.len() + open.len() > params.max_boundary {
        return None;
    }
    open.shuffle(rng);
    let outputs: Vec<WireType> = open.iter().map(|(_, t)| t.clone()).collect();
    for (j, (s, _)) in open.iter().enumerate() {
        wires.push((*s, Target::Output(j)));
    }
    let d = Diagram::from_raw(inputs, outputs, nodes, wires).ok()?;
    debug_assert!(d.is_valid());
    if params.connected && !d.is_connected() {
        return None;
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_by_construction() {
        for dim in 1..5 {
            let u = random_unitary(dim, 42);
            assert!(u.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_unitary(3, 5), random_unitary(3, 5));
        assert_ne!(random_unitary(3, 5), random_unitary(3, 6));
        let p = RandomDiagramParams::basis("Q");
        assert_eq!(random_diagram(&p, 7).to_string(), random_diagram(&p, 7).to_string());
    }

    #[test]
    fn connected_and_valid() {
        let p = RandomDiagramParams::basis("Q");
        for seed in 0..50 {
            let d = random_diagram(&p, seed);
            assert!(d.is_valid(), "{d}");
            assert!(d.is_connected());
            assert!(d.node_count() <= 8);
            assert!(d.inputs().len() + d.outputs().len() <= 6);
        }
    }
}
