//! Real root isolation for low-degree polynomials: grid sign scan plus exact bisection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::SeriesError;

/// Grid points per unit length. An integer grid alone misses pairs of roots
/// sharing a unit interval.
const GRID_STEPS_PER_UNIT: i64 = 64;

/// A univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<BigRational>,
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Result<RealPolynomial, SeriesError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(SeriesError::ZeroPolynomial);
        }
        Ok(RealPolynomial { coeffs })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<RealPolynomial, SeriesError> {
        RealPolynomial::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// A real root located to within the requested tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    /// Midpoint of the final bracket (or the exact value).
    pub value: f64,
    pub bracket: (f64, f64),
    /// Set when the root was hit exactly at a rational grid point.
    pub exact: Option<BigRational>,
}

fn rat(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite interval endpoint")
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// All real roots of `p` in `[lo, hi]` with a sign change or an exact grid hit,
/// ascending. Double roots that touch zero without crossing between grid points
/// are not detected.
pub fn real_roots(p: &RealPolynomial, lo: f64, hi: f64, tolerance: f64) -> Vec<RealRoot> {
    assert!(tolerance > 0.0, "tolerance must be positive");
    assert!(lo <= hi, "empty interval");
    let (lo, hi) = (rat(lo), rat(hi));
    let tol = rat(tolerance);
    let step = BigRational::new(1.into(), GRID_STEPS_PER_UNIT.into());

    let mut grid = vec![lo.clone()];
    loop {
        let next = grid.last().unwrap() + &step;
        if next >= hi {
            grid.push(hi.clone());
            break;
        }
        grid.push(next);
    }
    grid.dedup();

    let values: Vec<BigRational> = grid.iter().map(|x| p.eval(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if values[i].is_zero() {
            let v = grid[i].to_f64().unwrap_or(f64::NAN);
            roots.push(RealRoot {
                value: v,
                bracket: (v, v),
                exact: Some(grid[i].clone()),
            });
        }
        if i + 1 < grid.len() && sign(&values[i]) * sign(&values[i + 1]) < 0 {
            roots.push(bisect(p, grid[i].clone(), grid[i + 1].clone(), &tol));
        }
    }
    roots
}

fn bisect(p: &RealPolynomial, mut a: BigRational, mut b: BigRational, tol: &BigRational) -> RealRoot {
    let two = BigRational::from_integer(2.into());
    let sa = sign(&p.eval(&a));
    while &(&b - &a) >= tol {
        let mid = (&a + &b) / &two;
        let sm = sign(&p.eval(&mid));
        if sm == 0 {
            let v = mid.to_f64().unwrap_or(f64::NAN);
            return RealRoot {
                value: v,
                bracket: (v, v),
                exact: Some(mid),
            };
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let (af, bf) = (a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN));
    RealRoot {
        value: (af + bf) / 2.0,
        bracket: (af, bf),
        exact: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_greatest_root() {
        let q = RealPolynomial::from_integers(&[2, -41, 101, -97, 36, -4]).unwrap();
        let roots = real_roots(&q, 0.0, 10.0, 1e-9);
        let greatest = roots.last().unwrap();
        assert!((greatest.value - 5.1955).abs() < 5e-5);
        assert!(greatest.bracket.1 - greatest.bracket.0 < 1e-9);
        // independent high-precision evaluation: 0.0561326091, 2.1053331059, 5.1955435232
        let expected = [0.0561326091206382, 2.10533310594484, 5.19554352315468];
        assert_eq!(roots.len(), 3);
        for (r, e) in roots.iter().zip(expected) {
            assert!((r.value - e).abs() < 1e-8);
        }
    }

    #[test]
    fn quadratic_roots() {
        let p = RealPolynomial::from_integers(&[1, -3, 1]).unwrap();
        let roots = real_roots(&p, 0.0, 10.0, 1e-9);
        let s5 = 5f64.sqrt();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value - (3.0 - s5) / 2.0).abs() < 1e-9);
        assert!((roots[1].value - (3.0 + s5) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn no_real_roots() {
        let p = RealPolynomial::from_integers(&[1, 0, 1]).unwrap();
        assert!(real_roots(&p, -10.0, 10.0, 1e-9).is_empty());
    }

    #[test]
    fn exact_root_on_grid() {
        let p = RealPolynomial::from_integers(&[1, -4]).unwrap();
        let roots = real_roots(&p, 0.0, 10.0, 1e-9);
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].exact, Some(BigRational::new(1.into(), 4.into())));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            RealPolynomial::from_integers(&[0, 0]).unwrap_err(),
            SeriesError::ZeroPolynomial
        );
    }
}
