use crate::error::{Result, TvError};

/// Grouped coefficients: `n_groups` groups of `group_dim` values each.
///
/// Storage is plane-major: plane `j` holds component `j` of every group, so
/// for TV fields plane 0 is the horizontal difference and plane 1 the
/// vertical one.
#[derive(Debug, Clone, PartialEq)]
pub struct GradField {
    n_groups: usize,
    group_dim: usize,
    data: Vec<f64>,
}

impl GradField {
    pub fn new(n_groups: usize, group_dim: usize, data: Vec<f64>) -> Result<Self> {
        if n_groups == 0 || group_dim == 0 {
            return Err(TvError::InvalidParameter(
                "grad field needs at least one group of positive dimension".into(),
            ));
        }
        crate::error::check_len("grad field data", n_groups * group_dim, data.len())?;
        Ok(Self {
            n_groups,
            group_dim,
            data,
        })
    }

    pub fn zeros(n_groups: usize, group_dim: usize) -> Self {
        Self {
            n_groups,
            group_dim,
            data: vec![0.0; n_groups * group_dim],
        }
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    pub fn group_dim(&self) -> usize {
        self.group_dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn plane(&self, j: usize) -> &[f64] {
        &self.data[j * self.n_groups..(j + 1) * self.n_groups]
    }

    pub fn plane_mut(&mut self, j: usize) -> &mut [f64] {
        let n = self.n_groups;
        &mut self.data[j * n..(j + 1) * n]
    }

    /// The `group_dim` components of group `i`.
    pub fn group(&self, i: usize) -> Vec<f64> {
        (0..self.group_dim)
            .map(|j| self.data[j * self.n_groups + i])
            .collect()
    }

    /// Euclidean norm of group `i`.
    pub fn group_norm(&self, i: usize) -> f64 {
        let mut s = 0.0;
        for j in 0..self.group_dim {
            let v = self.data[j * self.n_groups + i];
            s += v * v;
        }
        s.sqrt()
    }

    /// Group-interleaved copy: `[g0_0, g0_1, g1_0, g1_1, ...]`.
    pub fn interleave(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.data.len());
        for i in 0..self.n_groups {
            for j in 0..self.group_dim {
                out.push(self.data[j * self.n_groups + i]);
            }
        }
        out
    }

    /// Inverse of [`GradField::interleave`].
    pub fn deinterleave(n_groups: usize, group_dim: usize, interleaved: &[f64]) -> Result<Self> {
        crate::error::check_len("interleaved field", n_groups * group_dim, interleaved.len())?;
        let mut data = vec![0.0; interleaved.len()];
        for i in 0..n_groups {
            for j in 0..group_dim {
                data[j * n_groups + i] = interleaved[i * group_dim + j];
            }
        }
        Self::new(n_groups, group_dim, data)
    }

    pub(crate) fn same_shape(&self, other: &GradField) -> Result<()> {
        crate::error::check_len("grad field groups", self.n_groups, other.n_groups)?;
        crate::error::check_len("grad field group_dim", self.group_dim, other.group_dim)
    }
}
