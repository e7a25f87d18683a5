//! Symmetric intersection forms on divisor-class bases and symbolic
//! expansion of top self-intersections into parameter polynomials.
//!
//! A form of degree n on a basis of named classes is a table of values on
//! degree-n monomials (multisets of basis names). Tables must be complete:
//! a missing entry is a load error, never a silent zero.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exact::poly::Poly;
use crate::exact::rational::{multinomial, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectError {
    UnknownClass(String),
    MissingEntry(String),
    DuplicateEntry(String),
    BadDegree { expected: u32, got: u32 },
    MixedContexts,
}

impl std::fmt::Display for IntersectError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntersectError::UnknownClass(c) => write!(f, "unknown divisor class `{c}`"),
            IntersectError::MissingEntry(m) => {
                write!(f, "intersection table is missing the monomial {m}")
            }
            IntersectError::DuplicateEntry(m) => {
                write!(f, "intersection table repeats the monomial {m}")
            }
            IntersectError::BadDegree { expected, got } => {
                write!(f, "monomial of degree {got} in a degree-{expected} table")
            }
            IntersectError::MixedContexts => {
                write!(f, "divisor expression coefficients use different variables")
            }
        }
    }
}

impl std::error::Error for IntersectError {}

/// A totally symmetric degree-n multilinear form given by its value table.
///
/// Table keys are exponent vectors over the basis (so symmetry holds by
/// construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    degree: u32,
    basis: Vec<String>,
    table: BTreeMap<Vec<u32>, Rat>,
}

impl IntersectionForm {
    /// Build from (multiset-of-class-names, value) entries; the table must
    /// contain every degree-n monomial over the basis exactly once.
    pub fn new(
        degree: u32,
        basis: &[&str],
        entries: &[(Vec<&str>, Rat)],
    ) -> Result<Self, IntersectError> {
        let basis: Vec<String> = basis.iter().map(|s| s.to_string()).collect();
        let mut table = BTreeMap::new();
        for (names, value) in entries {
            if names.len() != degree as usize {
                return Err(IntersectError::BadDegree {
                    expected: degree,
                    got: names.len() as u32,
                });
            }
            let mut expo = vec![0u32; basis.len()];
            for name in names {
                let i = basis
                    .iter()
                    .position(|b| b == name)
                    .ok_or_else(|| IntersectError::UnknownClass(name.to_string()))?;
                expo[i] += 1;
            }
            let label = monomial_label(&basis, &expo);
            if table.insert(expo, value.clone()).is_some() {
                return Err(IntersectError::DuplicateEntry(label));
            }
        }
        let form = IntersectionForm {
            degree,
            basis,
            table,
        };
        form.check_complete()?;
        Ok(form)
    }

    fn check_complete(&self) -> Result<(), IntersectError> {
        for expo in exponent_vectors(self.basis.len(), self.degree) {
            if !self.table.contains_key(&expo) {
                return Err(IntersectError::MissingEntry(monomial_label(
                    &self.basis,
                    &expo,
                )));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.table.iter()
    }

    /// Value on a degree-n monomial given as class-name multiset.
    pub fn value(&self, names: &[&str]) -> Result<Rat, IntersectError> {
        if names.len() != self.degree as usize {
            return Err(IntersectError::BadDegree {
                expected: self.degree,
                got: names.len() as u32,
            });
        }
        let mut expo = vec![0u32; self.basis.len()];
        for name in names {
            let i = self
                .basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| IntersectError::UnknownClass(name.to_string()))?;
            expo[i] += 1;
        }
        Ok(self.table[&expo].clone())
    }
}

fn monomial_label(basis: &[String], expo: &[u32]) -> String {
    let mut parts = Vec::new();
    for (b, &k) in basis.iter().zip(expo) {
        match k {
            0 => {}
            1 => parts.push(b.clone()),
            _ => parts.push(format!("{b}^{k}")),
        }
    }
    parts.join("·")
}

fn exponent_vectors(len: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    if len > 0 {
        rec(0, degree, &mut cur, &mut out);
    }
    out
}

/// A formal combination of basis classes with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorExpression {
    pub coeffs: BTreeMap<String, Poly>,
}

impl DivisorExpression {
    pub fn new(coeffs: &[(&str, Poly)]) -> Self {
        DivisorExpression {
            coeffs: coeffs
                .iter()
                .map(|(n, p)| (n.to_string(), p.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DivisorExpression) -> DivisorExpression {
        let mut coeffs = self.coeffs.clone();
        for (name, p) in &other.coeffs {
            let entry = coeffs.entry(name.clone()).or_insert_with(|| {
                Poly::zero(&p.vars().iter().map(|s| s.as_str()).collect::<Vec<_>>())
            });
            *entry = entry.sub(p);
        }
        coeffs.retain(|_, p| !p.is_zero());
        DivisorExpression { coeffs }
    }
}

/// Expand `expr^degree` against the table: the exact multinomial contraction
/// as a polynomial in the expression's parameters.
pub fn expand_power(
    form: &IntersectionForm,
    expr: &DivisorExpression,
) -> Result<Poly, IntersectError> {
    // collect the variable context from any coefficient; constants are fine
    let mut vars: Option<Vec<String>> = None;
    for (name, p) in &expr.coeffs {
        if !form.basis.iter().any(|b| b == name) {
            return Err(IntersectError::UnknownClass(name.clone()));
        }
        match &vars {
            None => vars = Some(p.vars().to_vec()),
            Some(v) => {
                if v != p.vars() {
                    return Err(IntersectError::MixedContexts);
                }
            }
        }
    }
    let vars = vars.unwrap_or_default();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let zero = Poly::zero(&var_refs);

    // coefficient polynomial per basis class, in basis order
    let coeff_polys: Vec<&Poly> = form
        .basis
        .iter()
        .map(|b| expr.coeffs.get(b).unwrap_or(&zero))
        .collect();

    let mut acc = Poly::zero(&var_refs);
    for expo in exponent_vectors(form.basis.len(), form.degree) {
        let tval = &form.table[&expo];
        if tval.is_zero() {
            continue;
        }
        let mut term = Poly::constant(&var_refs, multinomial(&expo) * tval.clone());
        let mut zero_factor = false;
        for (p, &k) in coeff_polys.iter().zip(&expo) {
            if k == 0 {
                continue;
            }
            if p.is_zero() {
                zero_factor = true;
                break;
            }
            term = term.mul(&p.pow(k));
        }
        if zero_factor {
            continue;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Expansion of the mobile part `expr - fixed_part`.
pub fn restricted_volume_from_table(
    form: &IntersectionForm,
    expr: &DivisorExpression,
    fixed_part: Option<&DivisorExpression>,
) -> Result<Poly, IntersectError> {
    match fixed_part {
        None => expand_power(form, expr),
        Some(fixed) => expand_power(form, &expr.sub(fixed)),
    }
}
