use std::collections::HashMap;
use std::hash::Hash;

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};

/// Finite-cluster correction applied to each clustered meat term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmallSample {
    None,
    /// Multiply each term by G / (G − 1), G being that term's cluster count.
    #[default]
    ClusterCount,
}

impl SmallSample {
    fn factor(self, groups: usize) -> f64 {
        match self {
            SmallSample::ClusterCount if groups > 1 => groups as f64 / (groups as f64 - 1.0),
            _ => 1.0,
        }
    }
}

/// Dense group ids in order of first appearance, and the number of groups.
pub fn group_ids<L: Hash + Eq>(labels: &[L]) -> (Vec<usize>, usize) {
    let mut index: HashMap<&L, usize> = HashMap::with_capacity(labels.len());
    let ids = labels
        .iter()
        .map(|l| {
            let next = index.len();
            *index.entry(l).or_insert(next)
        })
        .collect();
    (ids, index.len())
}

/// Σ_g s_g s_gᵀ where s_g sums the score rows of group g.
pub fn cluster_meat(scores: &DMatrix<f64>, groups: &[usize], n_groups: usize) -> DMatrix<f64> {
    let p = scores.ncols();
    let mut sums = DMatrix::<f64>::zeros(n_groups, p);
    for (i, &g) in groups.iter().enumerate() {
        for j in 0..p {
            sums[(g, j)] += scores[(i, j)];
        }
    }
    let mut meat = DMatrix::<f64>::zeros(p, p);
    for j in 0..p {
        for k in j..p {
            let v: f64 = (0..n_groups).map(|g| sums[(g, j)] * sums[(g, k)]).sum();
            meat[(j, k)] = v;
            meat[(k, j)] = v;
        }
    }
    meat
}

/// bread · meat · bread
pub fn sandwich(bread: &DMatrix<f64>, meat: &DMatrix<f64>) -> DMatrix<f64> {
    bread * meat * bread
}

fn clustered_meat<L: Hash + Eq>(scores: &DMatrix<f64>, labels: &[L], ss: SmallSample, dim: &str) -> (DMatrix<f64>, usize) {
    let (ids, g) = group_ids(labels);
    if g < 2 {
        warn!("only {g} cluster(s) in the {dim} dimension; clustered covariance is degenerate");
    }
    (cluster_meat(scores, &ids, g) * ss.factor(g), g)
}

pub fn sandwich_cov_oneway<L: Hash + Eq>(
    bread: &DMatrix<f64>,
    scores: &DMatrix<f64>,
    labels: &[L],
    ss: SmallSample,
) -> DMatrix<f64> {
    let (meat, _) = clustered_meat(scores, labels, ss, "clustering");
    sandwich(bread, &meat)
}

#[derive(Debug, Clone)]
pub struct TwoWayCovariance {
    /// V_a + V_b − V_ab before any repair.
    pub raw: DMatrix<f64>,
    /// Symmetrised, with negative eigenvalues clamped to zero.
    pub matrix: DMatrix<f64>,
    pub repaired: bool,
    pub min_eigenvalue: f64,
    /// Cluster counts: (a, b, a∩b).
    pub clusters: (usize, usize, usize),
}

/// Two-way clustered sandwich V_a + V_b − V_{a∩b}.
///
/// `scores` holds one row per observation; `bread` is the inverse Hessian
/// (or (XᵀWX)⁻¹). Each term gets its own finite-cluster factor.
pub fn sandwich_cov_twoway<A: Hash + Eq, B: Hash + Eq>(
    bread: &DMatrix<f64>,
    scores: &DMatrix<f64>,
    cluster_a: &[A],
    cluster_b: &[B],
    ss: SmallSample,
) -> TwoWayCovariance {
    let (meat_a, ga) = clustered_meat(scores, cluster_a, ss, "first");
    let (meat_b, gb) = clustered_meat(scores, cluster_b, ss, "second");
    let (ids_a, _) = group_ids(cluster_a);
    let (ids_b, _) = group_ids(cluster_b);
    let pairs: Vec<(usize, usize)> = ids_a.into_iter().zip(ids_b).collect();
    let (meat_ab, gab) = clustered_meat(scores, &pairs, ss, "intersection");

    let raw = sandwich(bread, &(meat_a + meat_b - meat_ab));
    let (matrix, repaired, min_eigenvalue) = repair_psd(&raw);
    TwoWayCovariance { raw, matrix, repaired, min_eigenvalue, clusters: (ga, gb, gab) }
}

/// Symmetrises `v` and clamps negative eigenvalues to zero.
/// Returns the matrix, whether clamping happened, and the smallest eigenvalue.
pub fn repair_psd(v: &DMatrix<f64>) -> (DMatrix<f64>, bool, f64) {
    let sym = (v + v.transpose()) * 0.5;
    if sym.nrows() == 0 {
        return (sym, false, 0.0);
    }
    let eig = SymmetricEigen::new(sym.clone());
    let min = eig.eigenvalues.min();
    if min >= 0.0 {
        return (sym, false, min);
    }
    let clamped = eig.eigenvalues.map(|l| l.max(0.0));
    let q = &eig.eigenvectors;
    let rebuilt = q * DMatrix::from_diagonal(&clamped) * q.transpose();
    ((&rebuilt + rebuilt.transpose()) * 0.5, true, min)
}
