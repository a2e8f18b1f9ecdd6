//! Reference implementations written without nalgebra, used as oracles.
#![allow(dead_code)]

/// Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, piv);
        b.swap(k, piv);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for (i, row) in rest.iter_mut().enumerate() {
            let f = row[k] / pivot[k];
            for (v, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *v -= f * p;
            }
            b[k + 1 + i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let cols: Vec<Vec<f64>> =
        (0..n).map(|j| solve(a.to_vec(), (0..n).map(|i| f64::from(u8::from(i == j))).collect())).collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

pub fn xtwx(x: &[Vec<f64>], w: &[f64]) -> Vec<Vec<f64>> {
    let p = x[0].len();
    let mut m = vec![vec![0.0; p]; p];
    for (row, wi) in x.iter().zip(w) {
        for a in 0..p {
            for b in 0..p {
                m[a][b] += wi * row[a] * row[b];
            }
        }
    }
    m
}

pub fn xtv(x: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let p = x[0].len();
    (0..p).map(|j| x.iter().zip(v).map(|(r, vi)| r[j] * vi).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn poisson_ll(x: &[Vec<f64>], y: &[f64], beta: &[f64]) -> f64 {
    x.iter().zip(y).map(|(r, yi)| {
        let eta = dot(r, beta);
        yi * eta - eta.exp()
    }).sum()
}

/// Damped Newton on the Poisson score equations X'(y − exp(Xβ)) = 0.
pub fn newton_poisson(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = x[0].len();
    let mut beta = vec![0.0; p];
    beta[0] = (y.iter().sum::<f64>() / y.len() as f64).ln();
    for _ in 0..500 {
        let mu: Vec<f64> = x.iter().map(|r| dot(r, &beta).exp()).collect();
        let resid: Vec<f64> = y.iter().zip(&mu).map(|(a, b)| a - b).collect();
        let g = xtv(x, &resid);
        let d = solve(xtwx(x, &mu), g);
        let ll0 = poisson_ll(x, y, &beta);
        let mut t = 1.0;
        let mut next: Vec<f64> = beta.iter().zip(&d).map(|(b, di)| b + t * di).collect();
        while poisson_ll(x, y, &next) < ll0 && t > 1e-8 {
            t *= 0.5;
            next = beta.iter().zip(&d).map(|(b, di)| b + t * di).collect();
        }
        let change = d.iter().map(|v| (t * v).abs()).fold(0.0, f64::max);
        beta = next;
        if change < 1e-15 {
            break;
        }
    }
    beta
}

/// Σ_g (Σ_{i∈g} s_i)(Σ_{i∈g} s_i)' computed group by group from scratch.
pub fn brute_cluster_meat(scores: &[Vec<f64>], labels: &[String]) -> Vec<Vec<f64>> {
    let p = scores[0].len();
    let mut distinct: Vec<&String> = labels.iter().collect();
    distinct.sort();
    distinct.dedup();
    let mut m = vec![vec![0.0; p]; p];
    for g in distinct {
        let mut s = vec![0.0; p];
        for (row, l) in scores.iter().zip(labels) {
            if l == g {
                for j in 0..p {
                    s[j] += row[j];
                }
            }
        }
        for a in 0..p {
            for b in 0..p {
                m[a][b] += s[a] * s[b];
            }
        }
    }
    m
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &nalgebra::DMatrix<f64>) -> f64 {
    let mut d: f64 = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            d = d.max((v - b[(i, j)]).abs());
        }
    }
    d
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
