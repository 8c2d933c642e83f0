//! Sparse polynomials over the rationals in the catalytic variables `u`, `v`, `y`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A catalytic variable. The main variable `z` is never represented here.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    U,
    V,
    Y,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::U, Var::V, Var::Y];

    pub fn index(self) -> usize {
        match self {
            Var::U => 0,
            Var::V => 1,
            Var::Y => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::U => "u",
            Var::V => "v",
            Var::Y => "y",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "u" => Some(Var::U),
            "v" => Some(Var::V),
            "y" => Some(Var::Y),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered subset of the catalytic variables.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn of(vars: &[Var]) -> VarSet {
        vars.iter().fold(VarSet::EMPTY, |s, &v| s.with(v))
    }

    pub fn with(self, var: Var) -> VarSet {
        VarSet(self.0 | (1 << var.index()))
    }

    pub fn without(self, var: Var) -> VarSet {
        VarSet(self.0 & !(1 << var.index()))
    }

    pub fn contains(self, var: Var) -> bool {
        self.0 & (1 << var.index()) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        Var::ALL.into_iter().filter(move |v| self.contains(*v))
    }
}

/// Exponents of `(u, v, y)` in one monomial.
pub type Exponents = [u32; 3];

/// A polynomial in `u, v, y` with rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exponents, BigRational>,
}

/// Outcome of dividing one polynomial by another.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotient: Poly,
    pub remainder: Poly,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::monomial(c, [0, 0, 0])
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn monomial(c: BigRational, exps: Exponents) -> Poly {
        let mut p = Poly::zero();
        p.add_term(exps, c);
        p
    }

    pub fn var(var: Var) -> Poly {
        let mut exps = [0; 3];
        exps[var.index()] = 1;
        Poly::monomial(BigRational::one(), exps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &Exponents) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant term, if the polynomial is a constant (possibly zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, scale: &BigRational) {
        for (e, c) in &other.terms {
            self.add_term(*e, c * scale);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        self.mul_add_into(other, &mut out);
        out
    }

    /// `acc += self * other`.
    pub fn mul_add_into(&self, other: &Poly, acc: &mut Poly) {
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                acc.add_term(add_exps(ea, eb), ca * cb);
            }
        }
    }

    /// Multiply by `var^k`.
    pub fn shift_var(&self, var: Var, k: u32) -> Poly {
        let i = var.index();
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[i] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn degree_in(&self, var: Var) -> u32 {
        self.terms
            .keys()
            .map(|e| e[var.index()])
            .max()
            .unwrap_or(0)
    }

    pub fn uses(&self, var: Var) -> bool {
        self.terms.keys().any(|e| e[var.index()] > 0)
    }

    pub fn vars(&self) -> VarSet {
        Var::ALL
            .into_iter()
            .filter(|v| self.uses(*v))
            .fold(VarSet::EMPTY, VarSet::with)
    }

    /// Substitute a rational value for `var`.
    pub fn eval(&self, var: Var, value: &BigRational) -> Poly {
        let i = var.index();
        let mut out = Poly::zero();
        let one = BigRational::one();
        for (e, c) in &self.terms {
            let k = e[i];
            let factor = if value.is_one() {
                one.clone()
            } else {
                pow_rat(value, k)
            };
            let mut e2 = *e;
            e2[i] = 0;
            out.add_term(e2, c * factor);
        }
        out
    }

    /// Substitute `to` for `from`; exponents merge if `to` already occurs.
    pub fn rename(&self, from: Var, to: Var) -> Poly {
        if from == to {
            return self.clone();
        }
        let (i, j) = (from.index(), to.index());
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[j] += e2[i];
            e2[i] = 0;
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn derivative(&self, var: Var) -> Poly {
        let i = var.index();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[i])));
        }
        out
    }

    fn leading(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Multivariate division by a single divisor under lex order `u > v > y`.
    /// The remainder is zero exactly when `divisor` divides `self`.
    pub fn divide(&self, divisor: &Poly) -> Division {
        let (lead_e, lead_c) = divisor
            .leading()
            .map(|(e, c)| (*e, c.clone()))
            .expect("division by the zero polynomial");
        let mut rest = self.clone();
        let mut quotient = Poly::zero();
        let mut remainder = Poly::zero();
        while let Some((e, c)) = rest.leading().map(|(e, c)| (*e, c.clone())) {
            if let Some(qe) = sub_exps(&e, &lead_e) {
                let qc = &c / &lead_c;
                let step = Poly::monomial(qc.clone(), qe);
                quotient.add_term(qe, qc);
                rest = rest.sub(&step.mul(divisor));
            } else {
                remainder.add_term(e, c.clone());
                rest.terms.remove(&e);
            }
        }
        Division { quotient, remainder }
    }

    /// Renders `z^zdeg` times the monomial, e.g. `z^3*u^2`.
    pub fn fmt_term(exps: &Exponents, zdeg: usize) -> String {
        let mut parts = Vec::new();
        if zdeg > 0 {
            parts.push(if zdeg == 1 {
                "z".to_string()
            } else {
                format!("z^{zdeg}")
            });
        }
        for v in Var::ALL {
            let k = exps[v.index()];
            if k == 1 {
                parts.push(v.name().to_string());
            } else if k > 1 {
                parts.push(format!("{}^{k}", v.name()));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Coefficients of the univariate polynomial in `var`, if no other variable occurs.
    pub fn univariate_coeffs(&self, var: Var) -> Option<Vec<BigRational>> {
        let i = var.index();
        let mut out = vec![BigRational::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return None;
            }
            out[e[i] as usize] = c.clone();
        }
        if self.is_zero() {
            out.clear();
        }
        Some(out)
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.terms.values().any(|c| c.is_negative())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = Poly::fmt_term(e, 0);
            if mono == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn add_exps(a: &Exponents, b: &Exponents) -> Exponents {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub_exps(a: &Exponents, b: &Exponents) -> Option<Exponents> {
    if a.iter().zip(b).all(|(x, y)| x >= y) {
        Some([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    } else {
        None
    }
}

pub(crate) fn pow_rat(base: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= base;
    }
    acc
}
