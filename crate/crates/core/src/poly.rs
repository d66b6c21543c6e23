//! Sparse polynomials over a finite field, their reduction modulo `x^Q - x`,
//! function tables and the permutation oracle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldElement, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("function is not a permutation")]
    NotPermutation,
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("table has {got} entries, field has {expected}")]
    BadTable { expected: usize, got: usize },
}

/// Maps `e >= 1` into `[1, Q-1]`, keeping `x^(Q-1)` distinct from `x^0`.
#[inline]
pub fn reduce_exponent(e: u64, q_order: u64) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % (q_order - 1) + 1
    }
}

/// `sum c_e x^e` with exponents strictly increasing and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    ctx: FieldCtx,
    terms: Vec<(u64, FieldElement)>,
}

impl SparsePoly {
    pub fn zero(ctx: &FieldCtx) -> Self {
        SparsePoly {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElement) -> Self {
        Self::monomial(ctx, 0, c)
    }

    pub fn x(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, 1, ctx.one())
    }

    pub fn monomial(ctx: &FieldCtx, e: u64, c: FieldElement) -> Self {
        Self::from_terms(ctx, vec![(e, c)])
    }

    /// Sorts, merges like terms and drops zeros. Exponents are not reduced.
    pub fn from_terms(ctx: &FieldCtx, mut terms: Vec<(u64, FieldElement)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, FieldElement)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = ctx.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        SparsePoly {
            ctx: ctx.clone(),
            terms: out,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(u64, FieldElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coeff(&self, e: u64) -> FieldElement {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => self.ctx.zero(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        let q = self.ctx.order() as u64;
        self.terms.iter().all(|t| t.0 < q)
    }

    /// Canonical representative modulo `x^Q - x`.
    pub fn reduce(&self) -> Self {
        let q = self.ctx.order() as u64;
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| (reduce_exponent(e, q), c))
            .collect();
        Self::from_terms(&self.ctx, terms)
    }

    pub fn eval(&self, x: FieldElement) -> Result<FieldElement, PolyError> {
        self.ctx.check(x)?;
        let f = &self.ctx;
        let mut acc = f.zero();
        for &(e, c) in &self.terms {
            acc = f.add(acc, f.mul(c, f.pow(x, e)));
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.ctx != other.ctx {
            return Err(FieldError::CtxMismatch.into());
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Self::from_terms(&self.ctx, terms))
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| (e, self.ctx.neg(c)))
            .collect();
        Self::from_terms(&self.ctx, terms)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Result<Self, PolyError> {
        self.ctx.check(c)?;
        let terms = self
            .terms
            .iter()
            .map(|&(e, a)| (e, self.ctx.mul(a, c)))
            .collect();
        Ok(Self::from_terms(&self.ctx, terms))
    }

    /// Product, reduced modulo `x^Q - x`.
    pub fn mul_reduced(&self, other: &Self) -> Result<Self, PolyError> {
        if self.ctx != other.ctx {
            return Err(FieldError::CtxMismatch.into());
        }
        let f = &self.ctx;
        let q = f.order() as u64;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                terms.push((reduce_exponent(e1 + e2, q), f.mul(c1, c2)));
            }
        }
        Ok(Self::from_terms(f, terms))
    }

    /// `self^k` by repeated squaring, reduced modulo `x^Q - x`.
    pub fn pow_reduced(&self, mut k: u64) -> Self {
        let mut acc = Self::constant(&self.ctx, self.ctx.one());
        let mut b = self.reduce();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_reduced(&b).expect("same context");
            }
            k >>= 1;
            if k > 0 {
                b = b.mul_reduced(&b).expect("same context");
            }
        }
        acc
    }

    /// `self^k` for `k` a power of the characteristic: each term `c x^e`
    /// becomes `c^k x^(e k)`.
    pub fn frobenius_twist(&self, k: u64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| (e * k, self.ctx.pow(c, k)))
            .collect();
        Self::from_terms(&self.ctx, terms)
    }

    /// `h(self)` where `h` has coefficients in a subfield of `self.ctx`
    /// (identified by equal indices), reduced.
    pub fn compose_outer(&self, h: &SparsePoly) -> Result<Self, PolyError> {
        let f = &self.ctx;
        let mut acc = Self::zero(f);
        for &(k, c) in &h.terms {
            let c = f
                .try_element(c.index() as u64)
                .filter(|_| h.ctx.order() <= f.order())
                .ok_or(FieldError::CtxMismatch)?;
            acc = acc.add(&self.pow_reduced(k).scale(c)?)?;
        }
        Ok(acc)
    }

    pub fn to_table(&self) -> FnTable {
        let f = &self.ctx;
        let mut values = vec![f.zero(); f.order() as usize];
        for &(e, c) in &self.terms {
            for (i, slot) in values.iter_mut().enumerate() {
                let x = f.element(i as u32);
                *slot = f.add(*slot, f.mul(c, f.pow(x, e)));
            }
        }
        FnTable {
            ctx: f.clone(),
            values,
        }
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(e, c)| {
                let cs = self.ctx.format_element(c);
                match (e, c == self.ctx.one()) {
                    (0, _) => cs,
                    (1, true) => "x".into(),
                    (1, false) => format!("{cs}*x"),
                    (_, true) => format!("x^{e}"),
                    (_, false) => format!("{cs}*x^{e}"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|&(e, c)| JsonTerm {
                e,
                c: self.ctx.coords(c).iter().map(|x| x.index()).collect(),
            })
            .collect()
    }

    pub fn from_json_terms(ctx: &FieldCtx, terms: &[JsonTerm]) -> Result<Self, PolyError> {
        let base = ctx.base().cloned().unwrap_or_else(|| ctx.clone());
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let coords =
                t.c.iter()
                    .map(|&v| {
                        base.try_element(v as u64).ok_or_else(|| PolyError::Parse {
                            line: 1,
                            col: 1,
                            msg: format!("coefficient coordinate {v} out of range"),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            out.push((t.e, ctx.from_coords(&coords)?));
        }
        Ok(Self::from_terms(ctx, out))
    }
}

/// JSON form of one monomial: exponent and coefficient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub e: u64,
    pub c: Vec<u32>,
}

pub fn eval(p: &SparsePoly, x: FieldElement) -> Result<FieldElement, PolyError> {
    p.eval(x)
}

pub fn reduce(p: &SparsePoly) -> SparsePoly {
    p.reduce()
}

pub fn to_table(p: &SparsePoly) -> FnTable {
    p.to_table()
}

pub fn is_permutation(t: &FnTable) -> bool {
    t.is_permutation()
}

pub fn compositional_inverse_table(t: &FnTable) -> Result<FnTable, PolyError> {
    t.inverse()
}

pub fn interpolate(t: &FnTable) -> SparsePoly {
    t.interpolate()
}

/// Values of a function on every field element, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnTable {
    ctx: FieldCtx,
    values: Vec<FieldElement>,
}

impl FnTable {
    pub fn new(ctx: &FieldCtx, values: Vec<FieldElement>) -> Result<Self, PolyError> {
        if values.len() != ctx.order() as usize {
            return Err(PolyError::BadTable {
                expected: ctx.order() as usize,
                got: values.len(),
            });
        }
        for v in &values {
            ctx.check(*v)?;
        }
        Ok(FnTable {
            ctx: ctx.clone(),
            values,
        })
    }

    /// Table from raw element indices; panics on out-of-range entries.
    pub fn from_indices(ctx: &FieldCtx, idx: &[u32]) -> Self {
        assert_eq!(idx.len(), ctx.order() as usize);
        FnTable {
            ctx: ctx.clone(),
            values: idx.iter().map(|&i| ctx.element(i)).collect(),
        }
    }

    pub fn from_fn(ctx: &FieldCtx, f: impl Fn(FieldElement) -> FieldElement) -> Self {
        FnTable {
            ctx: ctx.clone(),
            values: ctx.elements().map(f).collect(),
        }
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::from_fn(ctx, |x| x)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn indices(&self) -> Vec<u32> {
        self.values.iter().map(|v| v.index()).collect()
    }

    #[inline]
    pub fn get(&self, x: FieldElement) -> FieldElement {
        self.values[x.index() as usize]
    }

    pub fn is_permutation(&self) -> bool {
        self.collision().is_none()
    }

    /// Two distinct inputs with the same image, found with an early exit.
    pub fn collision(&self) -> Option<(FieldElement, FieldElement)> {
        let mut seen = vec![u32::MAX; self.values.len()];
        for (i, v) in self.values.iter().enumerate() {
            let slot = &mut seen[v.index() as usize];
            if *slot != u32::MAX {
                return Some((self.ctx.element(*slot), self.ctx.element(i as u32)));
            }
            *slot = i as u32;
        }
        None
    }

    pub fn inverse(&self) -> Result<FnTable, PolyError> {
        let mut inv = vec![u32::MAX; self.values.len()];
        for (i, v) in self.values.iter().enumerate() {
            let slot = &mut inv[v.index() as usize];
            if *slot != u32::MAX {
                return Err(PolyError::NotPermutation);
            }
            *slot = i as u32;
        }
        Ok(Self::from_indices(&self.ctx, &inv))
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &FnTable) -> Result<FnTable, PolyError> {
        if self.ctx != inner.ctx {
            return Err(FieldError::CtxMismatch.into());
        }
        Ok(FnTable {
            ctx: self.ctx.clone(),
            values: inner.values.iter().map(|&y| self.get(y)).collect(),
        })
    }

    pub fn add(&self, other: &FnTable) -> Result<FnTable, PolyError> {
        if self.ctx != other.ctx {
            return Err(FieldError::CtxMismatch.into());
        }
        Ok(FnTable {
            ctx: self.ctx.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| self.ctx.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: FieldElement) -> Result<FnTable, PolyError> {
        self.ctx.check(c)?;
        Ok(FnTable {
            ctx: self.ctx.clone(),
            values: self.values.iter().map(|&a| self.ctx.mul(a, c)).collect(),
        })
    }

    /// The unique reduced polynomial inducing this table.
    pub fn interpolate(&self) -> SparsePoly {
        let f = &self.ctx;
        let q = f.order() as u64;
        let q1 = q - 1;
        let mut terms = Vec::new();
        let f0 = self.values[0];
        terms.push((0, f0));
        if q == 2 {
            // c_1 = f(1) - f(0)
            terms.push((1, f.sub(self.values[1], f0)));
            return SparsePoly::from_terms(f, terms);
        }
        // c_k = -sum_{a != 0} f(a) a^(Q-1-k) for 1 <= k <= Q-2
        let logs: Vec<(u64, FieldElement)> = (1..q as u32)
            .filter(|&i| !self.values[i as usize].is_zero())
            .map(|i| (f.log(f.element(i)).unwrap() as u64, self.values[i as usize]))
            .collect();
        for k in 1..q1 {
            let mut s = f.zero();
            for &(la, fa) in &logs {
                s = f.add(s, f.mul(fa, f.generator_power(la * (q1 - k))));
            }
            terms.push((k, f.neg(s)));
        }
        let total = self.values.iter().fold(f.zero(), |acc, &v| f.add(acc, v));
        terms.push((q1, f.neg(total)));
        SparsePoly::from_terms(f, terms)
    }
}

struct Lexer {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for ch in text.chars() {
            chars.push((line, col, ch));
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Lexer { chars, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].2.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.2)
    }

    fn here(&self) -> (usize, usize) {
        match self.chars.get(self.pos) {
            Some(&(l, c, _)) => (l, c),
            None => self
                .chars
                .last()
                .map(|&(l, c, _)| (l, c + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn error(&self, msg: impl Into<String>) -> PolyError {
        let (line, col) = self.here();
        PolyError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn number(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].2.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.2).collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.error("number too large")
        })
    }

    // Balanced parenthesised group, returned verbatim.
    fn group(&mut self) -> Result<String, PolyError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0i32;
        while self.pos < self.chars.len() {
            match self.chars[self.pos].2 {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        return Ok(self.chars[start..self.pos].iter().map(|c| c.2).collect());
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        self.pos = start;
        Err(self.error("unbalanced parenthesis"))
    }
}

/// Parses a polynomial such as `x^3 + 3*(a2)*x^11 - (1,2)*x`.
///
/// Terms are products of factors joined by `+` or `-`; a factor is an integer,
/// an element tuple, a generator power `a<k>` (optionally parenthesised) or
/// `x` with an optional `^<int>`.
pub fn parse_poly(ctx: &FieldCtx, text: &str) -> Result<SparsePoly, PolyError> {
    let mut lx = Lexer::new(text);
    let mut terms = Vec::new();
    let mut negate = false;
    match lx.peek() {
        Some('+') => lx.pos += 1,
        Some('-') | Some('−') => {
            lx.pos += 1;
            negate = true;
        }
        None => return Err(lx.error("empty polynomial")),
        _ => {}
    }
    loop {
        let (e, c) = parse_term(ctx, &mut lx)?;
        terms.push((e, if negate { ctx.neg(c) } else { c }));
        match lx.peek() {
            None => break,
            Some('+') => {
                lx.pos += 1;
                negate = false;
            }
            Some('-') | Some('−') => {
                lx.pos += 1;
                negate = true;
            }
            Some(ch) => return Err(lx.error(format!("unexpected `{ch}`"))),
        }
    }
    Ok(SparsePoly::from_terms(ctx, terms))
}

fn parse_term(ctx: &FieldCtx, lx: &mut Lexer) -> Result<(u64, FieldElement), PolyError> {
    let mut e = 0u64;
    let mut c = ctx.one();
    loop {
        let (fe, fc) = parse_factor(ctx, lx)?;
        e = e
            .checked_add(fe)
            .ok_or_else(|| lx.error("exponent overflow"))?;
        c = ctx.mul(c, fc);
        if lx.peek() == Some('*') {
            lx.pos += 1;
        } else {
            return Ok((e, c));
        }
    }
}

fn parse_factor(ctx: &FieldCtx, lx: &mut Lexer) -> Result<(u64, FieldElement), PolyError> {
    let at = lx.here();
    let located = |err: FieldError| PolyError::Parse {
        line: at.0,
        col: at.1,
        msg: err.to_string(),
    };
    match lx.peek() {
        Some('x') => {
            lx.pos += 1;
            if lx.peek() == Some('^') {
                lx.pos += 1;
                Ok((lx.number()?, ctx.one()))
            } else {
                Ok((1, ctx.one()))
            }
        }
        Some('a') => {
            lx.pos += 1;
            let k = lx.number()?;
            Ok((0, ctx.generator_power(k)))
        }
        Some('(') => {
            let g = lx.group()?;
            Ok((0, ctx.parse_element(&g).map_err(located)?))
        }
        Some(ch) if ch.is_ascii_digit() => {
            let n = lx.number()?;
            Ok((0, ctx.from_int((n % ctx.p() as u64) as i64)))
        }
        Some(ch) => Err(lx.error(format!("unexpected `{ch}`"))),
        None => Err(lx.error("unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_CAP;

    fn f(q: u64) -> FieldCtx {
        FieldCtx::prime_power(q, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn reduction_rules() {
        let k = f(16);
        let q = 16;
        let p = SparsePoly::monomial(&k, q, k.one()).reduce();
        assert_eq!(p, SparsePoly::x(&k));
        let p = SparsePoly::monomial(&k, 2 * q - 1, k.one()).reduce();
        assert_eq!(p.terms()[0].0, 1);
        let p = SparsePoly::monomial(&k, 2 * q - 2, k.one()).reduce();
        assert_eq!(p.terms()[0].0, q - 1);
        assert_eq!(
            SparsePoly::monomial(&k, 0, k.one()).reduce().terms()[0].0,
            0
        );
        let x = SparsePoly::x(&k);
        let sum = x.add(&x).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn tables_and_oracle() {
        let k = f(4);
        assert!(SparsePoly::x(&k).to_table().is_permutation());
        assert!(SparsePoly::monomial(&k, 2, k.one())
            .to_table()
            .is_permutation());
        let cube = SparsePoly::monomial(&k, 3, k.one()).to_table();
        assert!(!cube.is_permutation());
        let (a, b) = cube.collision().unwrap();
        assert_ne!(a, b);
        assert_eq!(cube.get(a), cube.get(b));
        let c = SparsePoly::constant(&k, k.element(2)).to_table();
        assert!(c.values().iter().all(|&v| v == k.element(2)));
        assert!(SparsePoly::zero(&k)
            .to_table()
            .values()
            .iter()
            .all(|v| v.is_zero()));
    }

    #[test]
    fn monomial_inverses_in_f25() {
        let k = f(25);
        // every unit of Z/24 is its own inverse, so x^7 inverts itself
        let t = SparsePoly::monomial(&k, 7, k.one()).to_table();
        let inv = t.inverse().unwrap();
        assert_eq!(inv, t);
        let t = SparsePoly::monomial(&k, 5, k.one())
            .add(&SparsePoly::x(&k).scale(k.generator()).unwrap())
            .unwrap()
            .to_table();
        let inv = t.inverse().unwrap();
        assert!(!SparsePoly::monomial(&k, 3, k.one())
            .to_table()
            .is_permutation());
        assert_eq!(t.compose(&inv).unwrap(), FnTable::identity(&k));
        assert_eq!(
            SparsePoly::monomial(&k, 2, k.one())
                .to_table()
                .inverse()
                .unwrap_err(),
            PolyError::NotPermutation
        );
    }

    #[test]
    fn frobenius_table_is_involution() {
        let k = f(25);
        let t = SparsePoly::monomial(&k, 5, k.one()).to_table();
        assert_eq!(t.compose(&t).unwrap(), FnTable::identity(&k));
        assert_eq!(t.inverse().unwrap(), t);
    }

    #[test]
    fn interpolation_round_trip() {
        for q in [2, 3, 4, 9] {
            let k = f(q);
            let id = FnTable::identity(&k);
            assert_eq!(id.interpolate(), SparsePoly::x(&k));
            let c = FnTable::from_fn(&k, |_| k.one());
            assert_eq!(c.interpolate(), SparsePoly::constant(&k, k.one()));
            let p = parse_poly(&k, "x^2 + 2*x + 1").unwrap().reduce();
            assert_eq!(p.to_table().interpolate(), p);
            let top = SparsePoly::monomial(&k, q - 1, k.one());
            assert_eq!(top.to_table().interpolate(), top);
        }
    }

    #[test]
    fn powers_and_twists() {
        let k = f(9);
        let p = parse_poly(&k, "x + (1,1)*x^2").unwrap();
        let cube = p.pow_reduced(3);
        let direct = p.frobenius_twist(3).reduce();
        assert_eq!(cube, direct);
        for x in k.elements() {
            assert_eq!(cube.eval(x).unwrap(), k.pow(p.eval(x).unwrap(), 3));
        }
    }

    #[test]
    fn parse_and_format() {
        let k = f(25);
        let p = parse_poly(&k, "x^3 + 3*(a2)*x^11").unwrap();
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.coeff(11), k.mul(k.from_int(3), k.generator_power(2)));
        let again = parse_poly(&k, &p.format()).unwrap();
        assert_eq!(again, p);
        let q = parse_poly(&k, "- x + (2,3)*x^2*x − 4").unwrap();
        assert_eq!(q.coeff(1), k.neg(k.one()));
        assert_eq!(q.coeff(3), k.parse_element("(2,3)").unwrap());
        assert_eq!(q.coeff(0), k.from_int(1));
        match parse_poly(&k, "x +\n  y") {
            Err(PolyError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly(&k, "x^"), Err(PolyError::Parse { .. })));
        assert!(matches!(
            parse_poly(&k, "(1,2"),
            Err(PolyError::Parse { .. })
        ));
        assert!(matches!(parse_poly(&k, ""), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn json_terms_round_trip() {
        let k = f(25);
        let p = parse_poly(&k, "x^3 + (1,4)*x^11 + 2").unwrap();
        let j = p.to_json_terms();
        assert_eq!(
            j[2],
            JsonTerm {
                e: 11,
                c: vec![1, 4]
            }
        );
        assert_eq!(SparsePoly::from_json_terms(&k, &j).unwrap(), p);
    }

    #[test]
    fn compose_outer_embeds_base_coefficients() {
        let base = f(5);
        let ext = FieldCtx::extension(&base, 2).unwrap();
        let h = parse_poly(&base, "x^3 + 2").unwrap();
        let t = parse_poly(&ext, "x + x^5").unwrap();
        let comp = t.compose_outer(&h).unwrap();
        for x in ext.elements() {
            let tx = t.eval(x).unwrap();
            let want = ext.add(ext.pow(tx, 3), ext.from_int(2));
            assert_eq!(comp.eval(x).unwrap(), want);
        }
    }
}
