/// FISTA weight sequence `t₁ = 1`, `t_{k+1} = (1 + √(1 + 4t_k²))/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumState {
    /// `t_k`
    pub t: f64,
    /// `t_{k−1}`, zero before the first step
    pub t_prev: f64,
    pub k: usize,
}

impl Default for MomentumState {
    fn default() -> Self {
        Self::new()
    }
}

impl MomentumState {
    pub fn new() -> Self {
        Self {
            t: 1.0,
            t_prev: 0.0,
            k: 1,
        }
    }

    /// Advances from `t_k` to `t_{k+1}`.
    pub fn next(self) -> Self {
        Self {
            t: (1.0 + (1.0 + 4.0 * self.t * self.t).sqrt()) / 2.0,
            t_prev: self.t,
            k: self.k + 1,
        }
    }

    /// `τ_{k−1} = (t_{k−1} − 1)/t_k`: the extrapolation weight produced by the
    /// last call to [`MomentumState::next`]. Zero for the initial state.
    pub fn tau(&self) -> f64 {
        if self.k == 1 {
            0.0
        } else {
            (self.t_prev - 1.0) / self.t
        }
    }
}

/// Free-function form of [`MomentumState::next`].
pub fn momentum_next(state: MomentumState) -> MomentumState {
    state.next()
}
