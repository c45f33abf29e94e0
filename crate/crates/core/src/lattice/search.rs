use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::basis::Basis;
use super::matrix::{dot, Matrix};

/// Largest dimension the box enumerations accept.
pub const MAX_ENUM_DIM: usize = 4;
/// Largest dimension for the successive-minima search.
pub const MAX_SIVP_DIM: usize = 3;
const MAX_BOX_POINTS: u128 = 50_000_000;

/// A lattice vector together with its integer coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint<T> {
    pub coeffs: Vec<i64>,
    pub vector: Vec<T>,
    /// Squared norm of `vector` (SVP) or squared distance to the target (CVP).
    pub norm_sq: T,
}

impl<T: Scalar> LatticePoint<T> {
    pub fn norm(&self) -> f64 {
        self.norm_sq.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }
}

/// Visits every coefficient vector in the box, first coordinate most significant.
fn for_each_in_box(bounds: &[i64], mut visit: impl FnMut(&[i64])) {
    let mut g: Vec<i64> = bounds.iter().map(|m| -m).collect();
    loop {
        visit(&g);
        let mut i = g.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if g[i] < bounds[i] {
                g[i] += 1;
                break;
            }
            g[i] = -bounds[i];
        }
    }
}

fn check_box(bounds: &[i64]) -> Result<()> {
    let points = bounds.iter().fold(1u128, |acc, m| acc.saturating_mul(2 * *m as u128 + 1));
    if points > MAX_BOX_POINTS {
        return Err(Error::Unsupported(format!("search box of {points} points")));
    }
    Ok(())
}

fn enum_precheck<T: Scalar>(b: &Basis<T>, bound: i64) -> Result<()> {
    if b.dim() > MAX_ENUM_DIM {
        return Err(Error::Unsupported(format!("enumeration in dimension {} > {MAX_ENUM_DIM}", b.dim())));
    }
    if bound < 1 {
        return Err(Error::domain("coefficient bound must be at least 1"));
    }
    check_box(&vec![bound; b.dim()])
}

/// Shortest nonzero `sum g_i v_i` with every `|g_i| <= bound`; ties go to the
/// lexicographically first coefficient vector.
pub fn svp_bruteforce<T: Scalar>(b: &Basis<T>, bound: i64) -> Result<LatticePoint<T>> {
    enum_precheck(b, bound)?;
    let mut best: Option<LatticePoint<T>> = None;
    let mut err = None;
    for_each_in_box(&vec![bound; b.dim()], |g| {
        if g.iter().all(|c| *c == 0) || err.is_some() {
            return;
        }
        match b.combine(g) {
            Ok(v) => {
                let n = dot(&v, &v);
                if best.as_ref().is_none_or(|p| n < p.norm_sq) {
                    best = Some(LatticePoint { coeffs: g.to_vec(), vector: v, norm_sq: n });
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(best.expect("box contains a nonzero point"))
}

/// Lattice vector in the coefficient box closest to `target`.
pub fn cvp_bruteforce<T: Scalar>(b: &Basis<T>, target: &[T], bound: i64) -> Result<LatticePoint<T>> {
    enum_precheck(b, bound)?;
    if target.len() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: target.len() });
    }
    let mut best: Option<LatticePoint<T>> = None;
    for_each_in_box(&vec![bound; b.dim()], |g| {
        let v = b.combine(g).expect("dimension checked");
        let diff: Vec<T> = v.iter().zip(target).map(|(x, y)| x.clone() - y.clone()).collect();
        let d = dot(&diff, &diff);
        if best.as_ref().is_none_or(|p| d < p.norm_sq) {
            best = Some(LatticePoint { coeffs: g.to_vec(), vector: v, norm_sq: d });
        }
    });
    Ok(best.expect("box is nonempty"))
}

fn independent<T: Scalar>(vs: &[Vec<T>]) -> bool {
    let gram: Vec<Vec<T>> = vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect();
    Matrix::from_rows(gram).and_then(|g| g.det()).is_ok_and(|d| !d.is_negligible())
}

/// All nonzero lattice vectors with squared norm at most `radius_sq`.
///
/// Depth-first over Gram-Schmidt levels; the float bounds are widened by one
/// and every leaf is re-checked exactly, so no point inside the ball is missed.
fn enumerate_ball<T: Scalar>(b: &Basis<T>, radius_sq: &T) -> Result<Vec<LatticePoint<T>>> {
    let n = b.dim();
    let vs: Vec<Vec<f64>> = b.vectors().iter().map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut bn = vec![0.0; n];
    for i in 0..n {
        let mut w = vs[i].clone();
        for j in 0..i {
            mu[i][j] = vs[i].iter().zip(&star[j]).map(|(a, c)| a * c).sum::<f64>() / bn[j];
            for (wk, sk) in w.iter_mut().zip(&star[j]) {
                *wk -= mu[i][j] * sk;
            }
        }
        bn[i] = w.iter().map(|x| x * x).sum();
        star.push(w);
    }
    let r2 = radius_sq.to_f64().unwrap_or(f64::INFINITY) * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut budget = MAX_BOX_POINTS;
    fn walk<T: Scalar>(
        level: usize,
        partial: f64,
        ctx: (&Basis<T>, &T, &[Vec<f64>], &[f64], f64),
        x: &mut Vec<i64>,
        out: &mut Vec<LatticePoint<T>>,
        budget: &mut u128,
    ) -> Result<()> {
        let (b, radius_sq, mu, bn, r2) = ctx;
        let n = x.len();
        let center: f64 = -(level + 1..n).map(|j| mu[j][level] * x[j] as f64).sum::<f64>();
        let spread = ((r2 - partial).max(0.0) / bn[level]).sqrt();
        let lo = (center - spread).floor() as i64 - 1;
        let hi = (center + spread).ceil() as i64 + 1;
        for xi in lo..=hi {
            if *budget == 0 {
                return Err(Error::Unsupported("enumeration budget exhausted".into()));
            }
            *budget -= 1;
            x[level] = xi;
            let here = partial + (xi as f64 - center).powi(2) * bn[level];
            if here > r2 * (1.0 + 1e-6) + 1.0 {
                continue;
            }
            if level == 0 {
                if x.iter().all(|c| *c == 0) {
                    continue;
                }
                let v = b.combine(x)?;
                let norm = dot(&v, &v);
                if norm <= *radius_sq {
                    out.push(LatticePoint { coeffs: x.clone(), vector: v, norm_sq: norm });
                }
            } else {
                walk(level - 1, here, ctx, x, out, budget)?;
            }
        }
        x[level] = 0;
        Ok(())
    }
    walk(n - 1, 0.0, (b, radius_sq, &mu, &bn, r2), &mut x, &mut out, &mut budget)?;
    out.sort_by(|a, c| a.norm_sq.partial_cmp(&c.norm_sq).unwrap_or(std::cmp::Ordering::Equal).then(a.coeffs.cmp(&c.coeffs)));
    Ok(out)
}

/// Successive minima for `n <= 3`: every lattice vector no longer than the
/// longest input vector is enumerated, then independent vectors are taken
/// greedily by norm. The result is checked to span the same lattice.
pub fn sivp_bruteforce<T: Scalar>(b: &Basis<T>) -> Result<Basis<T>> {
    let n = b.dim();
    if n > MAX_SIVP_DIM {
        return Err(Error::Unsupported(format!("SIVP in dimension {n} > {MAX_SIVP_DIM}")));
    }
    let candidates = enumerate_ball(b, &b.max_norm_sq())?;
    let mut chosen: Vec<Vec<T>> = Vec::new();
    for c in candidates {
        let mut trial = chosen.clone();
        trial.push(c.vector);
        if independent(&trial) {
            chosen = trial;
            if chosen.len() == n {
                break;
            }
        }
    }
    let out = Basis::new(chosen)?;
    if !(out.det().abs() - b.det().abs()).is_negligible() {
        return Err(Error::domain("successive minima do not form a basis"));
    }
    Ok(out)
}

/// Rounds the coordinates `B^-1 c` (half-integers toward +inf) and maps back.
pub fn babai_round<T: Scalar>(b: &Basis<T>, c: &[T]) -> Result<LatticePoint<T>> {
    let x = b.matrix().solve(c)?;
    let coeffs: Vec<i64> = x
        .iter()
        .map(|v| v.round_half_up().to_int().ok_or(Error::Overflow("babai_round")))
        .collect::<Result<_>>()?;
    let vector = b.combine(&coeffs)?;
    let diff: Vec<T> = vector.iter().zip(c).map(|(x, y)| x.clone() - y.clone()).collect();
    Ok(LatticePoint { coeffs, norm_sq: dot(&diff, &diff), vector })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::{Signed, Zero};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|x| Rational::from_int(*x)).collect()
    }

    fn frac(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn svp_examples() {
        let p = svp_bruteforce(&Basis::<Rational>::identity(2), 3).unwrap();
        assert_eq!(p.norm_sq, Rational::from_int(1));
        let b = Basis::<Rational>::from_ints(&[vec![2, 0], vec![1, 2]]).unwrap();
        let p = svp_bruteforce(&b, 5).unwrap();
        assert_eq!(p.norm_sq, Rational::from_int(4));
        assert_eq!(p.vector, r(&[-2, 0]));
        assert!(svp_bruteforce(&Basis::<Rational>::identity(5), 1).is_err());
    }

    #[test]
    fn cvp_examples() {
        let b = Basis::<Rational>::from_ints(&[vec![2, 0], vec![1, 2]]).unwrap();
        let w = r(&[3, 2]);
        let p = cvp_bruteforce(&b, &w, 4).unwrap();
        assert_eq!(p.vector, w);
        assert_eq!(p.norm_sq, Rational::from_int(0));
        let p = cvp_bruteforce(&Basis::<Rational>::identity(2), &[frac(2, 5), frac(3, 5)], 2).unwrap();
        assert_eq!(p.vector, r(&[0, 1]));
    }

    #[test]
    fn sivp_examples() {
        let id = Basis::<Rational>::identity(3);
        let out = sivp_bruteforce(&id).unwrap();
        assert!(out.vectors().iter().all(|v| dot(v, v) == Rational::from_int(1)));
        let b = Basis::<Rational>::from_ints(&[vec![1, 0], vec![10, 1]]).unwrap();
        let out = sivp_bruteforce(&b).unwrap();
        let mut got = out.vectors();
        got.iter_mut().for_each(|v| {
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
        });
        got.sort_by(|a, c| a.partial_cmp(c).unwrap());
        assert_eq!(got, vec![r(&[0, 1]), r(&[1, 0])]);
        assert!(out.max_norm_sq() <= b.max_norm_sq());
        assert!(sivp_bruteforce(&Basis::<Rational>::identity(4)).is_err());
    }

    #[test]
    fn babai_examples() {
        let b = Basis::<Rational>::from_ints(&[vec![2, 1], vec![1, 3]]).unwrap();
        let c = b.combine(&[3, -2]).unwrap();
        assert_eq!(babai_round(&b, &c).unwrap().vector, c);
        let p = babai_round(&Basis::<Rational>::identity(2), &[frac(2, 5), frac(-3, 5)]).unwrap();
        assert_eq!(p.vector, r(&[0, -1]));
        let p = babai_round(&Basis::<Rational>::identity(2), &[frac(1, 2), frac(-1, 2)]).unwrap();
        assert_eq!(p.vector, r(&[1, 0]));
        let p = babai_round(&Basis::<f64>::identity(2), &[0.4, -0.6]).unwrap();
        assert_eq!(p.vector, vec![0.0, -1.0]);
    }
}
