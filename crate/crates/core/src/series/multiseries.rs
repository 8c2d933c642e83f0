use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::poly::{Exponents, Poly, Var, VarSet};
use super::SeriesError;

thread_local! {
    static EXACT_DIVISIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of checked-exact polynomial divisions (slice quotients, divided
/// differences, divisions by `1 - var`) performed on this thread so far.
pub fn exact_division_count() -> u64 {
    EXACT_DIVISIONS.with(|c| c.get())
}

fn record_exact_division() {
    EXACT_DIVISIONS.with(|c| c.set(c.get() + 1));
}

/// The two slice quotients used when a new slice is added beside `k` marked
/// vertices.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SliceForm {
    /// `(f(1) - var*f(var)) / (1 - var)`: `var^k -> 1 + var + ... + var^k`.
    Inclusive,
    /// `(f(1) - f(var)) / (1 - var)`: `var^k -> 1 + var + ... + var^(k-1)`.
    Exclusive,
}

/// A power series in `z` truncated after `z^order`, each coefficient a
/// polynomial in the declared catalytic variables.
#[derive(Clone, Debug)]
pub struct MultiSeries {
    vars: VarSet,
    order: usize,
    coeffs: Vec<Poly>,
}

impl PartialEq for MultiSeries {
    /// Equality up to the smaller truncation order.
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl MultiSeries {
    pub fn zero(order: usize) -> MultiSeries {
        MultiSeries {
            vars: VarSet::EMPTY,
            order,
            coeffs: vec![Poly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> MultiSeries {
        MultiSeries::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> MultiSeries {
        let mut s = MultiSeries::zero(order);
        s.coeffs[0] = Poly::constant(c);
        s
    }

    pub fn integer(c: i64, order: usize) -> MultiSeries {
        MultiSeries::constant(BigRational::from_integer(c.into()), order)
    }

    /// `z^k` (zero if `k > order`).
    pub fn z_power(k: usize, order: usize) -> MultiSeries {
        let mut s = MultiSeries::zero(order);
        if k <= order {
            s.coeffs[k] = Poly::one();
        }
        s
    }

    pub fn var(var: Var, order: usize) -> MultiSeries {
        let mut s = MultiSeries::zero(order);
        s.vars = VarSet::EMPTY.with(var);
        s.coeffs[0] = Poly::var(var);
        s
    }

    /// Builds a series from explicit coefficients, dropping anything past `order`.
    pub fn from_coeffs(mut coeffs: Vec<Poly>, order: usize) -> MultiSeries {
        coeffs.resize(order + 1, Poly::zero());
        let vars = coeffs.iter().fold(VarSet::EMPTY, |s, p| s.union(p.vars()));
        MultiSeries {
            vars,
            order,
            coeffs,
        }
    }

    /// Univariate series with integer coefficients `c[0] + c[1] z + ...`.
    pub fn from_integers(c: &[i64], order: usize) -> MultiSeries {
        let coeffs = c
            .iter()
            .map(|&x| Poly::constant(BigRational::from_integer(x.into())))
            .collect();
        MultiSeries::from_coeffs(coeffs, order)
    }

    /// Parses a polynomial in `z, u, v, y` such as `"1 - 2z - u*z + u*z^2"`.
    pub fn polynomial(expr: &str, order: usize) -> Result<MultiSeries, SeriesError> {
        let terms = super::parse::parse_polynomial(expr)?;
        let mut s = MultiSeries::zero(order);
        for (zdeg, exps, c) in terms {
            if zdeg <= order {
                s.coeffs[zdeg].add_term(exps, c);
            }
        }
        s.refresh_vars();
        Ok(s)
    }

    /// Expansion of `numerator / denominator`. A common factor `z^k` of the
    /// denominator is shifted out first.
    pub fn rational_series(
        numerator: &str,
        denominator: &str,
        order: usize,
    ) -> Result<MultiSeries, SeriesError> {
        let den = MultiSeries::polynomial(denominator, order)?;
        let k = den.valuation().ok_or(SeriesError::NonUnitDenominator)?;
        let num = MultiSeries::polynomial(numerator, order + k)?;
        let den = MultiSeries::polynomial(denominator, order + k)?;
        num.shift_div(k)?.div(&den.shift_div(k)?)
    }

    fn refresh_vars(&mut self) {
        let used = self
            .coeffs
            .iter()
            .fold(VarSet::EMPTY, |s, p| s.union(p.vars()));
        self.vars = self.vars.union(used);
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    /// Declares additional catalytic variables without changing coefficients.
    pub fn with_vars(mut self, vars: VarSet) -> MultiSeries {
        self.vars = self.vars.union(vars);
        self
    }

    pub fn coeff(&self, n: usize) -> &Poly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, p: Poly) {
        if n <= self.order {
            self.vars = self.vars.union(p.vars());
            self.coeffs[n] = p;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Smallest `n` with a nonzero `z^n` coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|p| !p.is_zero())
    }

    pub fn truncate(&self, order: usize) -> MultiSeries {
        let order = order.min(self.order);
        MultiSeries {
            vars: self.vars,
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// First z-degree (up to the common order) where the two series differ.
    pub fn first_difference(&self, other: &MultiSeries) -> Option<usize> {
        let n = self.order.min(other.order);
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn agrees_to(&self, other: &MultiSeries, order: usize) -> bool {
        order <= self.order
            && order <= other.order
            && (0..=order).all(|k| self.coeffs[k] == other.coeffs[k])
    }

    /// The z-coefficients of a variable-free series, as rationals.
    pub fn univariate(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(Poly::as_constant).collect()
    }

    /// The z-coefficients of a variable-free series with integer coefficients.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.univariate()?
            .into_iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, s: &BigRational) -> MultiSeries {
        MultiSeries {
            vars: self.vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn scale_int(&self, s: i64) -> MultiSeries {
        self.scale(&BigRational::from_integer(s.into()))
    }

    fn zip_with(&self, other: &MultiSeries, f: impl Fn(&Poly, &Poly) -> Poly) -> MultiSeries {
        let order = self.order.min(other.order);
        MultiSeries {
            vars: self.vars.union(other.vars),
            order,
            coeffs: (0..=order)
                .map(|k| f(&self.coeffs[k], &other.coeffs[k]))
                .collect(),
        }
    }

    fn add_series(&self, other: &MultiSeries) -> MultiSeries {
        self.zip_with(other, Poly::add)
    }

    fn sub_series(&self, other: &MultiSeries) -> MultiSeries {
        self.zip_with(other, Poly::sub)
    }

    fn mul_series(&self, other: &MultiSeries) -> MultiSeries {
        let order = self.order.min(other.order);
        let mut coeffs = vec![Poly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    a.mul_add_into(b, &mut coeffs[i + j]);
                }
            }
        }
        MultiSeries {
            vars: self.vars.union(other.vars),
            order,
            coeffs,
        }
    }

    pub fn pow(&self, k: u32) -> MultiSeries {
        let mut acc = MultiSeries::one(self.order).with_vars(self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiply by `z^k`, keeping the truncation order.
    pub fn shift_mul(&self, k: usize) -> MultiSeries {
        let mut out = MultiSeries::zero(self.order).with_vars(self.vars);
        for n in k..=self.order {
            out.coeffs[n] = self.coeffs[n - k].clone();
        }
        out
    }

    /// `f / z^k`; requires the first `k` coefficients to vanish and lowers the order by `k`.
    pub fn shift_div(&self, k: usize) -> Result<MultiSeries, SeriesError> {
        if let Some(found) = (0..k.min(self.order + 1)).find(|&n| !self.coeffs[n].is_zero()) {
            return Err(SeriesError::Valuation { shift: k, found });
        }
        if k > self.order {
            return Err(SeriesError::Valuation {
                shift: k,
                found: self.order,
            });
        }
        Ok(MultiSeries {
            vars: self.vars,
            order: self.order - k,
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// z-adic long division `self / den`. When the constant coefficient of `den`
    /// is a nonzero polynomial rather than a number, every step is an exact
    /// polynomial division whose remainder must vanish.
    pub fn div(&self, den: &MultiSeries) -> Result<MultiSeries, SeriesError> {
        let order = self.order.min(den.order);
        let d0 = &den.coeffs[0];
        if d0.is_zero() {
            return Err(SeriesError::NonUnitDenominator);
        }
        let inv0 = d0.as_constant().map(|c| c.recip());
        let mut q: Vec<Poly> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut rest = self.coeffs[n].clone();
            for k in 1..=n {
                if den.coeffs[k].is_zero() || q[n - k].is_zero() {
                    continue;
                }
                rest = rest.sub(&den.coeffs[k].mul(&q[n - k]));
            }
            let qn = match &inv0 {
                Some(inv) => rest.scale(inv),
                None => {
                    let d = rest.divide(d0);
                    if !d.remainder.is_zero() {
                        return Err(SeriesError::InexactDivision {
                            op: "series division",
                            z_degree: n,
                        });
                    }
                    d.quotient
                }
            };
            q.push(qn);
        }
        let mut out = MultiSeries::from_coeffs(q, order);
        out.vars = out.vars.union(self.vars).union(den.vars);
        Ok(out)
    }

    /// Square root with constant term 1, by Newton iteration `g <- (g + f/g)/2`.
    /// Each step doubles the number of correct coefficients.
    pub fn sqrt(&self) -> Result<MultiSeries, SeriesError> {
        if self.coeffs[0] != Poly::one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let half = BigRational::new(1.into(), 2.into());
        let mut g = MultiSeries::one(self.order).with_vars(self.vars);
        let mut correct = 1usize;
        loop {
            let next = (&g + &self.div(&g)?).scale(&half);
            correct *= 2;
            if next == g || correct > 2 * (self.order + 1) {
                return Ok(next);
            }
            g = next;
        }
    }

    fn require_var(&self, var: Var) -> Result<(), SeriesError> {
        if self.vars.contains(var) {
            Ok(())
        } else {
            Err(SeriesError::UnknownVariable(var))
        }
    }

    /// Substitute a rational value for `var`, eliminating it.
    pub fn eval(&self, var: Var, value: &BigRational) -> Result<MultiSeries, SeriesError> {
        self.require_var(var)?;
        Ok(MultiSeries {
            vars: self.vars.without(var),
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.eval(var, value)).collect(),
        })
    }

    /// Shorthand for evaluating `var` at 1.
    pub fn at_one(&self, var: Var) -> Result<MultiSeries, SeriesError> {
        self.eval(var, &BigRational::one())
    }

    /// Substitute variable `to` for `from` (e.g. `D(u) -> D(v)`).
    pub fn rename(&self, from: Var, to: Var) -> Result<MultiSeries, SeriesError> {
        self.require_var(from)?;
        Ok(MultiSeries {
            vars: self.vars.without(from).with(to),
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.rename(from, to)).collect(),
        })
    }

    pub fn derivative(&self, var: Var) -> Result<MultiSeries, SeriesError> {
        self.require_var(var)?;
        Ok(MultiSeries {
            vars: self.vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.derivative(var)).collect(),
        })
    }

    fn divide_each(&self, divisor: &Poly, op: &'static str) -> Result<MultiSeries, SeriesError> {
        let mut coeffs = Vec::with_capacity(self.order + 1);
        for (n, p) in self.coeffs.iter().enumerate() {
            record_exact_division();
            let d = p.divide(divisor);
            if !d.remainder.is_zero() {
                return Err(SeriesError::InexactDivision { op, z_degree: n });
            }
            coeffs.push(d.quotient);
        }
        Ok(MultiSeries {
            vars: self.vars,
            order: self.order,
            coeffs,
        })
    }

    /// Exact division by `1 - var` at every z-degree.
    pub fn divide_by_one_minus(&self, var: Var) -> Result<MultiSeries, SeriesError> {
        self.require_var(var)?;
        let divisor = Poly::one().sub(&Poly::var(var));
        self.divide_each(&divisor, "division by 1 - var")
    }

    /// One of the two slice quotients in `var`; the division is asserted exact.
    pub fn slice_quotient(&self, var: Var, form: SliceForm) -> Result<MultiSeries, SeriesError> {
        self.require_var(var)?;
        let at_one = self.at_one(var)?;
        let numerator = match form {
            SliceForm::Inclusive => &at_one - &(&MultiSeries::var(var, self.order) * self),
            SliceForm::Exclusive => &at_one - self,
        };
        let divisor = Poly::one().sub(&Poly::var(var));
        numerator
            .with_vars(self.vars)
            .divide_each(&divisor, "slice quotient")
    }

    /// `(f(var_b) - f(var_a)) / (var_b - var_a)` for `f` in `var_a`; exact by construction.
    pub fn divided_difference(&self, var_a: Var, var_b: Var) -> Result<MultiSeries, SeriesError> {
        self.require_var(var_a)?;
        let moved = self.rename(var_a, var_b)?;
        let numerator = (&moved - self).with_vars(self.vars.with(var_b));
        let divisor = Poly::var(var_b).sub(&Poly::var(var_a));
        numerator.divide_each(&divisor, "divided difference")
    }

    /// Checks that every catalytic degree at `z^n` is at most `bound(n)`.
    pub fn check_degree_bound(&self, bound: impl Fn(usize) -> usize) -> Result<(), SeriesError> {
        for (n, p) in self.coeffs.iter().enumerate() {
            for var in Var::ALL {
                let degree = p.degree_in(var);
                if degree as usize > bound(n) {
                    return Err(SeriesError::DegreeBound {
                        z_degree: n,
                        var,
                        degree,
                        bound: bound(n),
                    });
                }
            }
        }
        Ok(())
    }

    /// Sparse term list, one `z^n*u^k: c` line per nonzero term.
    pub fn term_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (n, p) in self.coeffs.iter().enumerate() {
            for (e, c) in p.terms() {
                out.push(format!("{}: {}", Poly::fmt_term(e, n), c));
            }
        }
        out
    }

    pub fn to_json(&self) -> SeriesJson {
        let mut terms = Vec::new();
        for (n, p) in self.coeffs.iter().enumerate() {
            for (e, c) in p.terms() {
                terms.push(TermJson::new(n, e, c));
            }
        }
        SeriesJson {
            order: self.order,
            variables: self.vars.iter().collect(),
            terms,
        }
    }
}

/// JSON form of a series; rationals are encoded as strings like `"5/2"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub order: usize,
    pub variables: Vec<Var>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub z: usize,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub u: u32,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub v: u32,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub y: u32,
    pub coeff: String,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

impl TermJson {
    fn new(z: usize, e: &Exponents, c: &BigRational) -> TermJson {
        TermJson {
            z,
            u: e[0],
            v: e[1],
            y: e[2],
            coeff: c.to_string(),
        }
    }
}

impl TryFrom<&SeriesJson> for MultiSeries {
    type Error = SeriesError;

    fn try_from(json: &SeriesJson) -> Result<Self, Self::Error> {
        let mut s = MultiSeries::zero(json.order).with_vars(VarSet::of(&json.variables));
        for t in &json.terms {
            let c: BigRational = t.coeff.parse().map_err(|_| SeriesError::Parse {
                input: t.coeff.clone(),
                reason: "not a rational".into(),
            })?;
            if t.z <= json.order {
                s.coeffs[t.z].add_term([t.u, t.v, t.y], c);
            }
        }
        s.refresh_vars();
        Ok(s)
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.term_lines();
        if lines.is_empty() {
            writeln!(f, "0")?;
        }
        for line in lines {
            writeln!(f, "{line}")?;
        }
        write!(f, "+ O(z^{})", self.order + 1)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&MultiSeries> for &MultiSeries {
            type Output = MultiSeries;
            fn $method(self, rhs: &MultiSeries) -> MultiSeries {
                self.$inner(rhs)
            }
        }
        impl $tr<MultiSeries> for MultiSeries {
            type Output = MultiSeries;
            fn $method(self, rhs: MultiSeries) -> MultiSeries {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&MultiSeries> for MultiSeries {
            type Output = MultiSeries;
            fn $method(self, rhs: &MultiSeries) -> MultiSeries {
                (&self).$inner(rhs)
            }
        }
        impl $tr<MultiSeries> for &MultiSeries {
            type Output = MultiSeries;
            fn $method(self, rhs: MultiSeries) -> MultiSeries {
                self.$inner(&rhs)
            }
        }
    };
}

binop!(Add, add, add_series);
binop!(Sub, sub, sub_series);
binop!(Mul, mul, mul_series);

impl Neg for &MultiSeries {
    type Output = MultiSeries;
    fn neg(self) -> MultiSeries {
        MultiSeries {
            vars: self.vars,
            order: self.order,
            coeffs: self.coeffs.iter().map(Poly::neg).collect(),
        }
    }
}

impl Neg for MultiSeries {
    type Output = MultiSeries;
    fn neg(self) -> MultiSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    const N: usize = 10;

    fn s(expr: &str) -> MultiSeries {
        MultiSeries::polynomial(expr, N).unwrap()
    }

    fn ints(series: &MultiSeries) -> Vec<i64> {
        series
            .integer_coeffs()
            .unwrap()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect()
    }

    #[test]
    fn subtraction_coefficient() {
        let f = &MultiSeries::one(N) - &s("4z");
        assert_eq!(ints(&f)[1], -4);
    }

    #[test]
    fn multiplicative_identity() {
        let f = MultiSeries::rational_series("z", "1 - z*u", N).unwrap();
        assert_eq!(&f * &MultiSeries::one(N), f);
    }

    #[test]
    fn rational_series_geometric_in_u() {
        // z/(1 - zu) = z + z^2 u + z^3 u^2 + ...
        let f = MultiSeries::rational_series("z", "1 - z*u", N).unwrap();
        for n in 1..=N {
            let expected = Poly::monomial(BigRational::one(), [(n - 1) as u32, 0, 0]);
            assert_eq!(f.coeff(n), &expected, "z^{n}");
        }
        assert!(f.coeff(0).is_zero());
    }

    #[test]
    fn rational_series_long_division() {
        // z(1-z)/(1-2z) by long division: 0, 1, 1, 2, 4, 8, ...
        let f = MultiSeries::rational_series("z - z^2", "1 - 2z", N).unwrap();
        assert_eq!(ints(&f), vec![0, 1, 1, 2, 4, 8, 16, 32, 64, 128, 256]);
        let unit = MultiSeries::rational_series("1", "1", N).unwrap();
        assert_eq!(unit, MultiSeries::one(N));
    }

    #[test]
    fn rational_series_with_shift() {
        let f = MultiSeries::rational_series("z^3 + z^4", "z^2", N).unwrap();
        assert_eq!(f, s("z + z^2"));
        assert_eq!(
            MultiSeries::rational_series("1", "z", N).unwrap_err(),
            SeriesError::Valuation { shift: 1, found: 0 }
        );
    }

    #[test]
    fn sqrt_matches_binomial_oracle() {
        // (1-4z)^(1/2): coefficients -C(2n,n)/(2n-1), frozen from an independent expansion.
        let expected = [1, -2, -2, -4, -10, -28, -84, -264, -858, -2860, -9724];
        let root = (&MultiSeries::one(N) - &s("4z")).sqrt().unwrap();
        assert_eq!(ints(&root), expected);
        assert_eq!(&root * &root, &MultiSeries::one(N) - &s("4z"));
        assert_eq!(MultiSeries::one(N).sqrt().unwrap(), MultiSeries::one(N));
        assert_eq!(s("2 + z").sqrt().unwrap_err(), SeriesError::ConstantTermNotOne);
    }

    #[test]
    fn catalan_from_sqrt() {
        let root = (&MultiSeries::one(N + 1) - &MultiSeries::polynomial("4z", N + 1).unwrap())
            .sqrt()
            .unwrap();
        let catalan = (&MultiSeries::one(N + 1) - &root)
            .shift_div(1)
            .unwrap()
            .scale(&BigRational::new(1.into(), 2.into()));
        let minus_one = &catalan - &MultiSeries::one(N);
        assert_eq!(&ints(&minus_one)[..5], &[0, 1, 2, 5, 14]);
    }

    #[test]
    fn shift_div_cases() {
        assert_eq!(s("z^3 + z^4").shift_div(3).unwrap(), s("1 + z"));
        assert_eq!(s("z^3 + z^4").shift_div(3).unwrap().order(), N - 3);
        assert!(matches!(
            s("z").shift_div(2),
            Err(SeriesError::Valuation { shift: 2, found: 1 })
        ));
    }

    #[test]
    fn eval_and_derivative() {
        assert_eq!(s("z + z^2*u").eval(Var::U, &BigRational::zero()).unwrap(), s("z"));
        assert_eq!(s("z^2*u^2").derivative(Var::U).unwrap(), s("2z^2*u"));
        let free = s("z + z^3").with_vars(VarSet::of(&[Var::U]));
        assert!(free.derivative(Var::U).unwrap().is_zero());
        assert_eq!(
            s("z").eval(Var::U, &BigRational::one()).unwrap_err(),
            SeriesError::UnknownVariable(Var::U)
        );
    }

    #[test]
    fn slice_quotients() {
        let u2 = s("u^2");
        assert_eq!(u2.slice_quotient(Var::U, SliceForm::Inclusive).unwrap(), s("1 + u + u^2"));
        let one = MultiSeries::one(N).with_vars(VarSet::of(&[Var::U]));
        assert!(one.slice_quotient(Var::U, SliceForm::Exclusive).unwrap().is_zero());
        let u3 = s("u^3");
        assert_eq!(u3.slice_quotient(Var::U, SliceForm::Exclusive).unwrap(), s("1 + u + u^2"));
    }

    #[test]
    fn divided_differences() {
        assert_eq!(s("u^2").divided_difference(Var::U, Var::V).unwrap(), s("u + v"));
        assert_eq!(s("u").divided_difference(Var::U, Var::V).unwrap(), MultiSeries::one(N));
    }

    #[test]
    fn exact_division_with_polynomial_leading_coefficient() {
        // (1 - u)(1 + z) / (1 - u + z u^2) is not a polynomial: the division must fail...
        let bad = s("1 - u + z - z*u").div(&s("1 - u + z*u^2"));
        assert!(matches!(bad, Err(SeriesError::InexactDivision { .. })));
        // ...while (1 - u + z u^2)(1 + z) divides back exactly.
        let k = s("1 - u + z*u^2");
        let prod = &k * &s("1 + z");
        assert_eq!(prod.div(&k).unwrap(), s("1 + z"));
    }

    #[test]
    fn json_round_trip() {
        let f = s("z^3*u^2 - 1/2 z*y + 3");
        let json = serde_json::to_string(&f.to_json()).unwrap();
        assert!(json.contains("\"coeff\":\"-1/2\""));
        let back: SeriesJson = serde_json::from_str(&json).unwrap();
        assert_eq!(MultiSeries::try_from(&back).unwrap(), f);
    }

    #[test]
    fn term_lines_format() {
        let f = s("5/2 z^3*u^2");
        assert_eq!(f.term_lines(), vec!["z^3*u^2: 5/2".to_string()]);
    }
}
