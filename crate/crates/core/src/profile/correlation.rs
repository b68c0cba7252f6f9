use ndarray::{Array2, ArrayView1};

use super::FeatureMatrix;
use crate::error::{Error, Result};

/// Symmetric Pearson correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Array2<f64>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[[i, j]])
    }
}

/// Pearson correlation of two equal-length samples. Returns `None` when
/// either side has zero variance.
pub fn pearson(x: ArrayView1<'_, f64>, y: ArrayView1<'_, f64>) -> Option<f64> {
    let n = x.len() as f64;
    let mean_x = x.sum() / n;
    let mean_y = y.sum() / n;
    let (mut cov, mut var_x, mut var_y) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y.iter()) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return None;
    }
    Some((cov / (var_x.sqrt() * var_y.sqrt())).clamp(-1.0, 1.0))
}

pub fn pearson_correlation_matrix(features: &FeatureMatrix) -> Result<CorrelationMatrix> {
    let values = &features.values;
    if values.nrows() < 2 {
        return Err(Error::Empty(format!(
            "correlation needs at least 2 rows, got {}",
            values.nrows()
        )));
    }
    for (j, col) in values.columns().into_iter().enumerate() {
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(Error::DegenerateColumn(features.columns[j].clone()));
        }
    }
    let n = values.ncols();
    let mut out = Array2::<f64>::eye(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = pearson(values.column(i), values.column(j))
                .ok_or_else(|| Error::DegenerateColumn(features.columns[j].clone()))?;
            out[[i, j]] = r;
            out[[j, i]] = r;
        }
    }
    Ok(CorrelationMatrix {
        names: features.columns.clone(),
        values: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};
    use proptest::prelude::*;

    fn matrix(cols: &[&[f64]]) -> FeatureMatrix {
        let rows = cols[0].len();
        let values = Array2::from_shape_fn((rows, cols.len()), |(i, j)| cols[j][i]);
        FeatureMatrix::new(
            (0..cols.len()).map(|j| format!("f{j}")).collect(),
            (0..rows).map(|i| format!("r{i}")).collect(),
            values,
        )
        .unwrap()
    }

    #[test]
    fn self_and_negated_correlation() {
        let x = array![1.0, 4.0, 2.0, 8.0];
        let neg: Array1<f64> = -&x;
        assert!((pearson(x.view(), x.view()).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(x.view(), neg.view()).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_computed_value() {
        // cov = 5, var_x = 2, var_y = 114/9  =>  r = 5 / sqrt(228/9)
        let oracle = 5.0 / (228.0f64 / 9.0).sqrt();
        let r = pearson(array![1.0, 2.0, 3.0].view(), array![2.0, 4.0, 7.0].view()).unwrap();
        assert!((r - oracle).abs() < 1e-12);
        assert!((r - 0.9934).abs() < 5e-5);
    }

    #[test]
    fn zero_variance_column_named() {
        let fm = matrix(&[&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]]);
        match pearson_correlation_matrix(&fm).unwrap_err() {
            Error::DegenerateColumn(c) => assert_eq!(c, "f1"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn single_row_rejected() {
        let fm = matrix(&[&[1.0], &[2.0]]);
        assert!(pearson_correlation_matrix(&fm).is_err());
    }

    fn non_degenerate() -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
        (3usize..12, 1usize..5).prop_flat_map(|(rows, cols)| {
            (
                Just(rows),
                prop::collection::vec(prop::collection::vec(-50.0f64..50.0, rows), cols),
            )
        })
    }

    proptest! {
        #[test]
        fn symmetric_unit_diagonal((_rows, cols) in non_degenerate()) {
            let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
            let fm = matrix(&refs);
            if let Ok(c) = pearson_correlation_matrix(&fm) {
                for i in 0..cols.len() {
                    prop_assert_eq!(c.values[[i, i]], 1.0);
                    for j in 0..cols.len() {
                        prop_assert_eq!(c.values[[i, j]], c.values[[j, i]]);
                        prop_assert!((-1.0..=1.0).contains(&c.values[[i, j]]));
                    }
                }
            }
        }

        #[test]
        fn positive_affine_invariance(
            x in prop::collection::vec(-10.0f64..10.0, 8),
            y in prop::collection::vec(-10.0f64..10.0, 8),
            a in 0.1f64..20.0,
            b in -100.0f64..100.0,
        ) {
            let x = Array1::from(x);
            let y = Array1::from(y);
            let ax = x.mapv(|v| a * v + b);
            if let (Some(r), Some(r2)) = (pearson(x.view(), y.view()), pearson(ax.view(), y.view())) {
                prop_assert!((r - r2).abs() < 1e-12, "{} vs {}", r, r2);
            }
        }
    }
}
