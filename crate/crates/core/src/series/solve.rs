use super::multiseries::MultiSeries;
use super::SeriesError;
use num_traits::Zero;

/// Values that can be compared up to a truncation order: a single series, or a
/// tuple of series for coupled systems.
pub trait Truncated: Clone {
    fn agrees_to(&self, other: &Self, order: usize) -> bool;
}

impl Truncated for MultiSeries {
    fn agrees_to(&self, other: &Self, order: usize) -> bool {
        MultiSeries::agrees_to(self, other, order)
    }
}

impl Truncated for (MultiSeries, MultiSeries) {
    fn agrees_to(&self, other: &Self, order: usize) -> bool {
        self.0.agrees_to(&other.0, order) && self.1.agrees_to(&other.1, order)
    }
}

/// Iterates `f <- phi(f)` from `seed` until two successive iterates agree to
/// `order`. `phi` must be a z-adic contraction, so at most `order + 1` steps are
/// needed; anything beyond `order + 2` is reported as non-convergence.
pub fn fixed_point_solve<T, F>(mut phi: F, seed: T, order: usize) -> Result<T, SeriesError>
where
    T: Truncated,
    F: FnMut(&T) -> Result<T, SeriesError>,
{
    let limit = order + 2;
    let mut current = seed;
    for _ in 0..limit {
        let next = phi(&current)?;
        if next.agrees_to(&current, order) {
            return Ok(next);
        }
        current = next;
    }
    Err(SeriesError::NoConvergence { iterations: limit })
}

fn evaluate(coeffs: &[MultiSeries], f: &MultiSeries) -> MultiSeries {
    // Horner
    let mut acc = coeffs.last().expect("non-empty polynomial").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = &(&acc * f) + c;
    }
    acc
}

fn derivative_coeffs(coeffs: &[MultiSeries]) -> Vec<MultiSeries> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_int(k as i64))
        .collect()
}

/// Solves `sum_k coeffs[k] * F^k = 0` by Newton iteration `F <- F - P(F)/P'(F)`
/// from `seed`. The seed must satisfy the equation at `z^0` and `P'(seed)` must be
/// a unit; ramified branches are rejected rather than expanded in fractional powers.
pub fn newton_algebraic(
    coeffs: &[MultiSeries],
    seed: &MultiSeries,
    order: usize,
) -> Result<MultiSeries, SeriesError> {
    if coeffs.is_empty() {
        return Err(SeriesError::ZeroPolynomial);
    }
    let coeffs: Vec<MultiSeries> = coeffs.iter().map(|c| c.truncate(order)).collect();
    let deriv = derivative_coeffs(&coeffs);
    if deriv.is_empty() {
        return Err(SeriesError::NonUnitDerivative);
    }
    let mut f = seed.truncate(order);
    if !evaluate(&coeffs, &f).coeff(0).is_zero() {
        return Err(SeriesError::BadSeed);
    }
    let slope = evaluate(&deriv, &f);
    if slope.coeff(0).as_constant().is_none_or(|c| c.is_zero()) {
        return Err(SeriesError::NonUnitDerivative);
    }
    // Quadratic convergence; the bound only guards against misuse.
    for _ in 0..(2 * order + 4) {
        let value = evaluate(&coeffs, &f);
        if value.is_zero() {
            return Ok(f);
        }
        let slope = evaluate(&deriv, &f);
        f = &f - &value.div(&slope)?;
    }
    Err(SeriesError::NoConvergence {
        iterations: 2 * order + 4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 12;

    fn s(expr: &str) -> MultiSeries {
        MultiSeries::polynomial(expr, N).unwrap()
    }

    #[test]
    fn catalan_fixed_point() {
        let cat = fixed_point_solve(
            |c: &MultiSeries| Ok(&MultiSeries::one(N) + &(&s("z") * &(c * c))),
            MultiSeries::one(N),
            N,
        )
        .unwrap();
        let c: Vec<i64> = cat
            .integer_coeffs()
            .unwrap()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(&c[..5], &[1, 1, 2, 5, 14]);
    }

    #[test]
    fn non_contraction_is_reported() {
        // f <- 1 + f shifts the constant term forever.
        let res = fixed_point_solve(
            |f: &MultiSeries| Ok(&MultiSeries::one(N) + f),
            MultiSeries::zero(N),
            N,
        );
        assert!(matches!(res, Err(SeriesError::NoConvergence { .. })));
    }

    #[test]
    fn newton_square_root_agrees_with_sqrt() {
        let target = s("1 - 4z");
        let coeffs = [-&target, MultiSeries::zero(N), MultiSeries::one(N)];
        let root = newton_algebraic(&coeffs, &MultiSeries::one(N), N).unwrap();
        assert_eq!(root, target.sqrt().unwrap());
    }

    #[test]
    fn newton_linear_case() {
        // F - z - zF = 0  =>  F = z/(1-z)
        let coeffs = [-s("z"), s("1 - z")];
        let f = newton_algebraic(&coeffs, &MultiSeries::zero(N), N).unwrap();
        assert_eq!(f, MultiSeries::rational_series("z", "1 - z", N).unwrap());
    }

    #[test]
    fn newton_rejects_ramified_seed() {
        // F^2 - z: derivative 2F vanishes at the seed 0.
        let coeffs = [-s("z"), MultiSeries::zero(N), MultiSeries::one(N)];
        assert_eq!(
            newton_algebraic(&coeffs, &MultiSeries::zero(N), N).unwrap_err(),
            SeriesError::NonUnitDerivative
        );
    }
}
