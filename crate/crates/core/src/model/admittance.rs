use super::ModelError;

/// Series admittance `g + jb` between two hubs given by index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    pub g: f64,
    pub b: f64,
}

/// Real (`g`) and imaginary (`b`) parts of the nodal admittance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceMatrix {
    pub g: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
}

impl AdmittanceMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            g: vec![vec![0.0; n]; n],
            b: vec![vec![0.0; n]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.g.len()
    }
}

/// Shunt-free nodal assembly: each branch adds `g` on both diagonals and
/// `-g` on both off-diagonals, and likewise for `b`.
pub fn assemble_admittance(branches: &[Branch], n_hubs: usize) -> Result<AdmittanceMatrix, ModelError> {
    let mut y = AdmittanceMatrix::zeros(n_hubs);
    for (index, br) in branches.iter().enumerate() {
        for endpoint in [br.from, br.to] {
            if endpoint >= n_hubs {
                return Err(ModelError::EndpointOutOfRange {
                    index,
                    endpoint,
                    n_hubs,
                });
            }
        }
        let (j, o) = (br.from, br.to);
        y.g[j][j] += br.g;
        y.g[o][o] += br.g;
        y.g[j][o] -= br.g;
        y.g[o][j] -= br.g;
        y.b[j][j] += br.b;
        y.b[o][o] += br.b;
        y.b[j][o] -= br.b;
        y.b[o][j] -= br.b;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_line() {
        let y = assemble_admittance(&[Branch { from: 0, to: 1, g: 2.0, b: -10.0 }], 2).unwrap();
        assert_eq!(y.g, vec![vec![2.0, -2.0], vec![-2.0, 2.0]]);
        assert_eq!(y.b, vec![vec![-10.0, 10.0], vec![10.0, -10.0]]);
    }

    #[test]
    fn no_lines_gives_zero() {
        let y = assemble_admittance(&[], 3).unwrap();
        assert_eq!(y, AdmittanceMatrix::zeros(3));
    }

    #[test]
    fn parallel_lines_add() {
        let br = Branch { from: 0, to: 1, g: 1.0, b: -5.0 };
        let y = assemble_admittance(&[br, br], 2).unwrap();
        assert_eq!(y.g, vec![vec![2.0, -2.0], vec![-2.0, 2.0]]);
        assert_eq!(y.b, vec![vec![-10.0, 10.0], vec![10.0, -10.0]]);
    }

    #[test]
    fn endpoint_out_of_range() {
        let err = assemble_admittance(&[Branch { from: 0, to: 2, g: 1.0, b: -1.0 }], 2).unwrap_err();
        assert_eq!(
            err,
            ModelError::EndpointOutOfRange {
                index: 0,
                endpoint: 2,
                n_hubs: 2
            }
        );
    }

    fn branches(n: usize) -> impl Strategy<Value = Vec<Branch>> {
        prop::collection::vec((0..n, 0..n, -5.0..5.0f64, -20.0..20.0f64), 0..12).prop_map(|v| {
            v.into_iter()
                .filter(|(f, t, _, _)| f != t)
                .map(|(from, to, g, b)| Branch { from, to, g, b })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn rows_sum_to_zero_and_symmetric(lines in branches(6)) {
            let y = assemble_admittance(&lines, 6).unwrap();
            for j in 0..6 {
                prop_assert!(y.g[j].iter().sum::<f64>().abs() < 1e-9);
                prop_assert!(y.b[j].iter().sum::<f64>().abs() < 1e-9);
                for o in 0..6 {
                    prop_assert_eq!(y.g[j][o], y.g[o][j]);
                    prop_assert_eq!(y.b[j][o], y.b[o][j]);
                }
            }
        }
    }
}
