use serde::Serialize;

use crate::estimators::{stars, FitResult, FixedEffects, INTERCEPT};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionCell {
    pub coefficient: f64,
    pub standard_error: f64,
    pub p_value: f64,
    pub stars: &'static str,
}

impl RegressionCell {
    /// `coef*** (se)` with three decimals.
    pub fn render(&self) -> String {
        format!("{}{} ({})", fixed3(self.coefficient), self.stars, fixed3(self.standard_error))
    }
}

fn fixed3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_owned()
    } else {
        s
    }
}

type FooterRow = (&'static str, fn(&TableColumn) -> String);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableColumn {
    pub label: String,
    pub estimator: &'static str,
    pub destination_fe: bool,
    pub observations: usize,
    /// One entry per table row; `None` where the column omits the regressor.
    pub cells: Vec<Option<RegressionCell>>,
}

/// Coefficient table in the layout of the published gravity table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionTable {
    pub rows: Vec<String>,
    pub columns: Vec<TableColumn>,
}

impl RegressionTable {
    /// Fixed-effect columns leave the intercept blank: it is the reference
    /// group's effect, not a comparable constant.
    pub fn from_fits<'a>(rows: &[&str], fits: impl IntoIterator<Item = &'a FitResult>) -> Self {
        let columns = fits
            .into_iter()
            .enumerate()
            .map(|(k, fit)| {
                let fe = fit.fixed_effects == FixedEffects::Destination;
                let cells = rows
                    .iter()
                    .map(|&row| {
                        if fe && row == INTERCEPT {
                            return None;
                        }
                        let i = fit.index(row)?;
                        let p = fit.p_value(row)?;
                        Some(RegressionCell {
                            coefficient: fit.coefficients[i],
                            standard_error: fit.standard_errors[i],
                            p_value: p,
                            stars: stars(p),
                        })
                    })
                    .collect();
                TableColumn {
                    label: format!("({})", k + 1),
                    estimator: fit.estimator.label(),
                    destination_fe: fe,
                    observations: fit.n_obs,
                    cells,
                }
            })
            .collect();
        RegressionTable { rows: rows.iter().map(|s| s.to_string()).collect(), columns }
    }

    pub fn cell(&self, row: &str, column: usize) -> Option<&RegressionCell> {
        let r = self.rows.iter().position(|x| x == row)?;
        self.columns.get(column)?.cells[r].as_ref()
    }

    fn grid(&self) -> Vec<Vec<String>> {
        let mut grid = vec![std::iter::once(String::new()).chain(self.columns.iter().map(|c| c.label.clone())).collect()];
        for (r, name) in self.rows.iter().enumerate() {
            let mut line = vec![name.clone()];
            line.extend(self.columns.iter().map(|c| c.cells[r].as_ref().map(RegressionCell::render).unwrap_or_default()));
            grid.push(line);
        }
        let footer: [FooterRow; 3] = [
            ("Observations", |c| c.observations.to_string()),
            ("Destination FE", |c| if c.destination_fe { "Yes" } else { "No" }.to_owned()),
            ("Estimator", |c| c.estimator.to_owned()),
        ];
        for (name, f) in footer {
            grid.push(std::iter::once(name.to_owned()).chain(self.columns.iter().map(f)).collect());
        }
        grid
    }

    /// Aligned plain text: label column left-aligned, values right-aligned.
    pub fn to_text(&self) -> String {
        let grid = self.grid();
        let ncol = grid[0].len();
        let widths: Vec<usize> =
            (0..ncol).map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &grid {
            let mut line = format!("{:<w$}", row[0], w = widths[0]);
            for j in 1..ncol {
                line.push_str(&format!("  {:>w$}", row[j], w = widths[j]));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// Rows joined with ` & `, one line per table row.
    pub fn to_tabular(&self) -> String {
        self.grid().iter().map(|r| r.join(" & ") + "\\\\\n").collect()
    }
}
