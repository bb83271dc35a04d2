//! Rank by elimination over truncated Novikov series.
//!
//! Used only to cross-check the exact F2(T) rank. Pivoting is full: the
//! remaining entry of lowest T-order wins, ties broken by column then row.

use super::laurent::LaurentPoly;
use super::matrix::SparseMatrix;
use super::novikov::NovikovWindow;
use crate::error::{Error, Result};

/// Rank of a Laurent matrix computed with windows of relative width `w`.
///
/// Entries that end up "zero to precision" are certified zero when their
/// absolute precision exceeds `(k+1)·e_max − Σ val(pivots)`, an upper bound
/// for the valuation of any nonzero Schur-complement entry after `k` pivots
/// (ratio of a `(k+1)`-minor to the pivot minor). Otherwise the window was
/// too small and `WindowOverflow` is returned.
pub fn window_rank(m: &SparseMatrix<LaurentPoly>, w: usize) -> Result<usize> {
    if w == 0 {
        return Err(Error::WindowOverflow(
            "window width must be positive".into(),
        ));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let Some(emax) = m.entries().filter_map(|(_, _, p)| p.max_exponent()).max() else {
        return Ok(0);
    };
    let mut a = vec![vec![NovikovWindow::exact_zero(); cols]; rows];
    for (r, c, p) in m.entries() {
        a[r][c] = NovikovWindow::from_laurent(p, w).ok_or_else(|| {
            Error::WindowOverflow(format!(
                "entry ({r},{c}) = {p} spans more than {w} coefficients"
            ))
        })?;
    }
    let mut live_rows: Vec<usize> = (0..rows).collect();
    let mut live_cols: Vec<usize> = (0..cols).collect();
    let mut val_sum: i64 = 0;
    let mut k: i64 = 0;
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for &c in &live_cols {
            for &r in &live_rows {
                if let Some(v) = a[r][c].valuation() {
                    if best.is_none_or(|b| (v, c, r) < b) {
                        best = Some((v, c, r));
                    }
                }
            }
        }
        let Some((v, pc, pr)) = best else {
            let bound = (k + 1) * emax - val_sum;
            for &r in &live_rows {
                for &c in &live_cols {
                    if let Some(p) = a[r][c].precision() {
                        if p <= bound {
                            return Err(Error::WindowOverflow(format!(
                                "entry ({r},{c}) is zero only modulo T^{p}; need precision above {bound} (width {w})"
                            )));
                        }
                    }
                }
            }
            return Ok(k as usize);
        };
        let pinv = a[pr][pc].inv(w);
        live_rows.retain(|&r| r != pr);
        live_cols.retain(|&c| c != pc);
        for &r in &live_rows {
            if a[r][pc].is_exact_zero() {
                continue;
            }
            let f = a[r][pc].mul(&pinv, w);
            for &c in &live_cols {
                if a[pr][c].is_exact_zero() {
                    continue;
                }
                let t = f.mul(&a[pr][c], w);
                a[r][c] = a[r][c].add(&t, w);
            }
        }
        val_sum += v;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::rank_laurent;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn agrees_on_small_cases() {
        let m = SparseMatrix::from_dense(&[vec![lp("1+T")]]);
        assert_eq!(window_rank(&m, 64).unwrap(), 1);
        let id = SparseMatrix::<LaurentPoly>::identity(4);
        assert_eq!(window_rank(&id, 1).unwrap(), 4);
        // rank-one matrix whose second row is (1+T) times the first
        let m = SparseMatrix::from_dense(&[
            vec![lp("1"), lp("T^-1+T")],
            vec![lp("1+T"), lp("T^-1+1+T+T^2")],
        ]);
        assert_eq!(rank_laurent(&m), 1);
        assert_eq!(window_rank(&m, 64).unwrap(), 1);
        assert!(window_rank(&m, 2).is_err());
    }
}
