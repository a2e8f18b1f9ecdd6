use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{DesignMatrix, EstimationError, INTERCEPT};

#[derive(Debug, Clone)]
pub struct FixedEffectsDesign {
    pub design: DesignMatrix,
    /// Rows removed because their group's outcomes sum to zero.
    pub dropped_rows: usize,
    pub dropped_groups: Vec<String>,
    /// Group absorbed by the intercept.
    pub reference_group: String,
    /// Regressors constant within every group, removed as collinear with the dummies.
    pub absorbed_columns: Vec<String>,
}

/// Adds one dummy per group except a reference group, whose effect the
/// intercept carries.
///
/// Groups whose outcomes sum to zero are removed first (their effect would
/// diverge to −∞), then every regressor that is constant within each group
/// is dropped. Dummies are named `FE[label]`, groups ordered by label.
pub fn add_fixed_effects(design: &DesignMatrix, groups: &[String]) -> Result<FixedEffectsDesign, EstimationError> {
    if groups.len() != design.nrows() {
        return Err(EstimationError::InvalidDesign(format!(
            "{} group labels for {} rows",
            groups.len(),
            design.nrows()
        )));
    }
    let mut totals: BTreeMap<&str, f64> = BTreeMap::new();
    for (g, y) in groups.iter().zip(design.y().iter()) {
        *totals.entry(g.as_str()).or_default() += y;
    }
    let dropped_groups: Vec<String> = totals.iter().filter(|(_, t)| **t == 0.0).map(|(g, _)| g.to_string()).collect();
    let kept: Vec<&str> = totals.keys().copied().filter(|g| totals[g] != 0.0).collect();
    if kept.is_empty() {
        return Err(EstimationError::AllGroupsZero);
    }
    let rows: Vec<usize> = (0..design.nrows()).filter(|&i| totals[groups[i].as_str()] != 0.0).collect();
    let dropped_rows = design.nrows() - rows.len();
    let base = design.select_rows(&rows)?;
    let row_groups: Vec<&str> = rows.iter().map(|&i| groups[i].as_str()).collect();

    // columns varying within at least one group survive
    let x = base.x();
    let intercept = base.intercept_index();
    let mut keep_cols = Vec::new();
    let mut absorbed_columns = Vec::new();
    for (j, name) in base.names().iter().enumerate() {
        if Some(j) == intercept {
            continue;
        }
        let mut first: BTreeMap<&str, f64> = BTreeMap::new();
        let varies = row_groups.iter().enumerate().any(|(i, g)| {
            let v = x[(i, j)];
            *first.entry(g).or_insert(v) != v
        });
        if varies {
            keep_cols.push(j);
        } else {
            absorbed_columns.push(name.clone());
        }
    }

    let dummies = &kept[1..];
    let n = base.nrows();
    let p = 1 + keep_cols.len() + dummies.len();
    let mut names = Vec::with_capacity(p);
    names.push(INTERCEPT.to_owned());
    names.extend(keep_cols.iter().map(|&j| base.names()[j].clone()));
    names.extend(dummies.iter().map(|g| format!("FE[{g}]")));

    let dummy_index: BTreeMap<&str, usize> = dummies.iter().enumerate().map(|(k, g)| (*g, k)).collect();
    let offset = 1 + keep_cols.len();
    let mut out = DMatrix::<f64>::zeros(n, p);
    for i in 0..n {
        out[(i, 0)] = 1.0;
        for (k, &j) in keep_cols.iter().enumerate() {
            out[(i, 1 + k)] = x[(i, j)];
        }
        if let Some(&k) = dummy_index.get(row_groups[i]) {
            out[(i, offset + k)] = 1.0;
        }
    }
    let design = DesignMatrix::new(names, out, base.y().clone(), base.cluster_a().to_vec(), base.cluster_b().to_vec())?;
    Ok(FixedEffectsDesign {
        design,
        dropped_rows,
        dropped_groups,
        reference_group: kept[0].to_owned(),
        absorbed_columns,
    })
}
