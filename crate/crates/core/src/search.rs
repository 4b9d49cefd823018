//! One-dimensional minimization: uniform grid scan plus golden-section
//! refinement.

/// `(1 - 1/phi)`, the golden-section interior fraction.
const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Minimum found on `[lo, hi]`: location and value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub at: f64,
    pub value: f64,
}

/// Golden-section search on `[lo, hi]` down to an interval of width `tol`.
///
/// Returns the best interior point evaluated. The endpoints are not
/// evaluated; callers compare against them when needed.
pub fn golden_section<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let mut c = lo + GOLDEN * (hi - lo);
    let mut d = hi - GOLDEN * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fd < fc {
        Minimum { at: d, value: fd }
    } else {
        Minimum { at: c, value: fc }
    };
    // Bounded in case tol is below the resolution of f64 on this interval.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        // Ties keep the left part so that the smaller argument wins.
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = lo + GOLDEN * (hi - lo);
            fc = f(c);
            if fc < best.value || (fc == best.value && c < best.at) {
                best = Minimum { at: c, value: fc };
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = hi - GOLDEN * (hi - lo);
            fd = f(d);
            if fd < best.value {
                best = Minimum { at: d, value: fd };
            }
        }
    }
    best
}

/// Index of the first strict minimum of `values`.
pub fn argmin_first(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some((_, b)) if v >= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// Refine a grid minimum at `points[k]` by golden-section search between its
/// neighbours, keeping the grid value unless refinement is strictly better.
pub fn refine_bracket<F>(f: F, points: &[f64], k: usize, grid_value: f64, tol: f64) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let lo = points[k.saturating_sub(1)];
    let hi = points[(k + 1).min(points.len() - 1)];
    let grid = Minimum {
        at: points[k],
        value: grid_value,
    };
    if hi - lo <= tol {
        return grid;
    }
    let refined = golden_section(f, lo, hi, tol);
    if refined.value < grid.value {
        refined
    } else {
        grid
    }
}
