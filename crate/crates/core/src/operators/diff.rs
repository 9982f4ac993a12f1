//! Periodic forward differences on column-major grids.

use super::field::GradField;
use crate::error::{check_len, Result};

/// Applies `D = [D¹; D²]` plane by plane.
///
/// `D¹` is the horizontal difference `x[r, c+1] − x[r, c]` (offset `height`
/// in linear indexing), `D²` the vertical one `x[r+1, c] − x[r, c]`; both
/// wrap around. `x` may hold several channels back to back.
pub fn grad(x: &[f64], height: usize, width: usize) -> GradField {
    let n = height * width;
    assert!(
        n > 0 && x.len().is_multiple_of(n),
        "grad: length is not a whole number of planes"
    );
    let total = x.len();
    let mut data = vec![0.0; 2 * total];
    let (horiz, vert) = data.split_at_mut(total);
    for (plane, (hp, vp)) in x
        .chunks_exact(n)
        .zip(horiz.chunks_exact_mut(n).zip(vert.chunks_exact_mut(n)))
    {
        for c in 0..width {
            let right = if c + 1 == width { 0 } else { c + 1 };
            let col = &plane[c * height..(c + 1) * height];
            let next = &plane[right * height..(right + 1) * height];
            for r in 0..height {
                let i = c * height + r;
                hp[i] = next[r] - col[r];
                let down = if r + 1 == height { 0 } else { r + 1 };
                vp[i] = col[down] - col[r];
            }
        }
    }
    GradField::new(total, 2, data).expect("shape computed above")
}

/// Applies `Dᵀ`, the exact adjoint of [`grad`].
pub fn div_adjoint(z: &GradField, height: usize, width: usize) -> Result<Vec<f64>> {
    let n = height * width;
    check_len("div_adjoint group_dim", 2, z.group_dim())?;
    if n == 0 || !z.n_groups().is_multiple_of(n) {
        return Err(crate::TvError::DimensionMismatch {
            context: "div_adjoint groups",
            expected: n,
            actual: z.n_groups(),
        });
    }
    let total = z.n_groups();
    let mut out = vec![0.0; total];
    for ((op, hp), vp) in out
        .chunks_exact_mut(n)
        .zip(z.plane(0).chunks_exact(n))
        .zip(z.plane(1).chunks_exact(n))
    {
        for c in 0..width {
            let left = if c == 0 { width - 1 } else { c - 1 };
            for r in 0..height {
                let i = c * height + r;
                let up = if r == 0 { height - 1 } else { r - 1 };
                op[i] = hp[left * height + r] - hp[i] + vp[c * height + up] - vp[i];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_zero_gradient() {
        let g = grad(&[0.5; 12], 3, 4);
        assert!(g.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_by_two_hand_evaluation() {
        // matrix [[1,2],[3,4]] in column-major order
        let g = grad(&[1.0, 3.0, 2.0, 4.0], 2, 2);
        assert_eq!(g.plane(0), &[1.0, 1.0, -1.0, -1.0]);
        assert_eq!(g.plane(1), &[2.0, -2.0, 2.0, -2.0]);
    }

    #[test]
    fn rectangular_wraps_use_column_height() {
        // 2 rows x 3 cols: x = [[0,1,2],[10,11,12]]
        let x = [0.0, 10.0, 1.0, 11.0, 2.0, 12.0];
        let g = grad(&x, 2, 3);
        assert_eq!(g.plane(0), &[1.0, 1.0, 1.0, 1.0, -2.0, -2.0]);
        assert_eq!(g.plane(1), &[10.0, -10.0, 10.0, -10.0, 10.0, -10.0]);
    }

    #[test]
    fn adjoint_of_zero_and_of_constant_gradient() {
        let z = GradField::zeros(9, 2);
        assert!(div_adjoint(&z, 3, 3).unwrap().iter().all(|&v| v == 0.0));
        let g = grad(&[0.25; 9], 3, 3);
        assert!(div_adjoint(&g, 3, 3).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn adjoint_rejects_wrong_shapes() {
        assert!(div_adjoint(&GradField::zeros(9, 1), 3, 3).is_err());
        assert!(div_adjoint(&GradField::zeros(8, 2), 3, 3).is_err());
    }
}
