//! Prime fields and extension towers.
//!
//! A [`FieldCtx`] is either a prime field `F_p` or an extension `F_b[t]/(m(t))`
//! of another context. Elements are plain [`FieldElement`] values that carry the
//! id of the context they belong to; every arithmetic operation goes through the
//! context.
//!
//! Elements are encoded canonically by their coordinate vector read as a
//! base-`b` integer, low degree first. Because the base field is encoded the
//! same way, the index of an element is also its flat base-`p` digit string, so
//! the prime subfield and the base field sit inside an extension as the
//! elements with small indices.
//!
//! Extension arithmetic is done by polynomial multiplication modulo the tower
//! modulus ([`FieldCtx::mul_reference`]). Once the canonical generator is known
//! the context also keeps exp/log/Zech tables and the public operations use
//! those instead.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Default upper bound on the order of any constructed field.
pub const DEFAULT_CAP: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

static NEXT_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {order} exceeds the size cap {cap}")]
    TooLarge { order: u128, cap: u64 },
    #[error("extension degree must be at least 2 (got {0})")]
    BadDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    CtxMismatch,
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("{d} does not divide {group}")]
    NotDivisor { d: u64, group: u64 },
    #[error("a field of characteristic 3 has no element of order 3")]
    CharThree,
    #[error("no a with a^(q-1) equal to the given element")]
    NoSolution,
    #[error("operation needs an extension field")]
    NotExtension,
    #[error("modulus must be monic of degree at least 2")]
    BadModulus,
    #[error("modulus is reducible over the base field")]
    NotIrreducible,
    #[error("trace is not fixed by Frobenius")]
    TraceNotInBase,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("cannot parse element `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// An element of some [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    ctx: u32,
    value: u32,
}

impl FieldElement {
    /// Position in the canonical enumeration of the field.
    #[inline]
    pub fn index(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn ctx_id(self) -> u32 {
        self.ctx
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}@{}", self.value, self.ctx)
    }
}

struct Tables {
    generator: u32,
    // exp has length 2(N-1) so that log a + log b never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[k] = log(1 + g^k), or NO_LOG when 1 + g^k = 0.
    zech: Vec<u32>,
}

struct Inner {
    id: u32,
    p: u32,
    order: u32,
    degree: u32,
    base: Option<FieldCtx>,
    modulus: Vec<u32>,
    flat_digits: u32,
    group_primes: Vec<u64>,
    tables: OnceLock<Tables>,
}

/// Immutable descriptor of a finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.base {
            None => write!(f, "F_{}", self.inner.order),
            Some(b) => write!(f, "F_{} / {:?}", self.inner.order, b),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^k`, or `None` if `q` is not a prime power.
pub fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    let primes = prime_factors(q);
    if primes.len() != 1 {
        return None;
    }
    let p = primes[0];
    let mut k = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        k += 1;
    }
    Some((p, k))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Dense polynomial helpers over a context, coefficients as raw indices,
// low degree first. Used only for the irreducibility scan.
fn poly_trim(p: &mut Vec<u32>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_rem_is_zero(f: &FieldCtx, num: &[u32], den: &[u32]) -> bool {
    let inner = &f.inner;
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = inner.raw_inv(den[dd]);
    while r.len() > dd && !(r.len() == 1 && r[0] == 0) {
        let top = r.len() - 1;
        let c = inner.raw_mul(r[top], lead_inv);
        if c != 0 {
            let shift = top - dd;
            for (i, &m) in den.iter().enumerate() {
                let t = inner.raw_mul(c, m);
                r[shift + i] = inner.raw_sub(r[shift + i], t);
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.len() <= dd {
            break;
        }
    }
    r.iter().all(|&c| c == 0)
}

fn is_irreducible_over(base: &FieldCtx, modulus: &[u32]) -> bool {
    let d = modulus.len() - 1;
    let b = base.order() as u64;
    // root check
    for x in 0..base.order() {
        let mut acc = 0u32;
        for &c in modulus.iter().rev() {
            acc = base.inner.raw_add(base.inner.raw_mul(acc, x), c);
        }
        if acc == 0 {
            return false;
        }
    }
    // monic factors of degree 2..=d/2 by trial division
    for deg in 2..=d / 2 {
        let count = b.pow(deg as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                cand.push((c % b) as u32);
                c /= b;
            }
            cand.push(1);
            if poly_rem_is_zero(base, modulus, &cand) {
                return false;
            }
        }
    }
    true
}

impl Inner {
    #[inline]
    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| self.build_tables())
    }

    fn base_order(&self) -> u32 {
        match &self.base {
            Some(b) => b.inner.order,
            None => self.p,
        }
    }

    fn add_digits(&self, x: u32, y: u32) -> u32 {
        let p = self.p;
        if p == 2 {
            return x ^ y;
        }
        let (mut a, mut b, mut pw, mut r) = (x, y, 1u32, 0u32);
        for _ in 0..self.flat_digits {
            let s = (a % p + b % p) % p;
            r += s * pw;
            a /= p;
            b /= p;
            pw = pw.wrapping_mul(p);
        }
        r
    }

    fn neg_digits(&self, x: u32) -> u32 {
        let p = self.p;
        if p == 2 {
            return x;
        }
        let (mut a, mut pw, mut r) = (x, 1u32, 0u32);
        for _ in 0..self.flat_digits {
            let d = a % p;
            r += ((p - d) % p) * pw;
            a /= p;
            pw = pw.wrapping_mul(p);
        }
        r
    }

    #[inline]
    fn raw_add(&self, x: u32, y: u32) -> u32 {
        if self.base.is_none() {
            let s = x + y;
            return if s >= self.p { s - self.p } else { s };
        }
        if x == 0 {
            return y;
        }
        if y == 0 {
            return x;
        }
        let t = self.tables();
        let n1 = self.order - 1;
        let lx = t.log[x as usize];
        let ly = t.log[y as usize];
        let d = if ly >= lx { ly - lx } else { ly + n1 - lx };
        let z = t.zech[d as usize];
        if z == NO_LOG {
            0
        } else {
            t.exp[(lx + z) as usize]
        }
    }

    #[inline]
    fn raw_neg(&self, x: u32) -> u32 {
        if self.base.is_none() {
            return if x == 0 { 0 } else { self.p - x };
        }
        if self.p == 2 || x == 0 {
            return x;
        }
        let t = self.tables();
        let half = (self.order - 1) / 2;
        t.exp[(t.log[x as usize] + half) as usize]
    }

    #[inline]
    fn raw_sub(&self, x: u32, y: u32) -> u32 {
        self.raw_add(x, self.raw_neg(y))
    }

    #[inline]
    fn raw_mul(&self, x: u32, y: u32) -> u32 {
        if self.base.is_none() {
            return ((x as u64 * y as u64) % self.p as u64) as u32;
        }
        if x == 0 || y == 0 {
            return 0;
        }
        let t = self.tables();
        t.exp[(t.log[x as usize] + t.log[y as usize]) as usize]
    }

    fn raw_inv(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        if self.base.is_none() {
            return self.raw_pow_reference(x, (self.p - 2) as u64);
        }
        let t = self.tables();
        let n1 = self.order - 1;
        let l = t.log[x as usize];
        t.exp[((n1 - l) % n1) as usize]
    }

    #[inline]
    fn raw_pow(&self, x: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let t = self.tables();
        let n1 = (self.order - 1) as u64;
        let l = t.log[x as usize] as u64;
        t.exp[((l * (e % n1)) % n1) as usize]
    }

    fn raw_mul_reference(&self, x: u32, y: u32) -> u32 {
        let Some(base) = &self.base else {
            return ((x as u64 * y as u64) % self.p as u64) as u32;
        };
        let b = base.inner.order;
        let d = self.degree as usize;
        let digits = |mut v: u32| {
            let mut out = vec![0u32; d];
            for slot in out.iter_mut() {
                *slot = v % b;
                v /= b;
            }
            out
        };
        let xa = digits(x);
        let ya = digits(y);
        let bi = &base.inner;
        let mut prod = vec![0u32; 2 * d - 1];
        for i in 0..d {
            if xa[i] == 0 {
                continue;
            }
            for j in 0..d {
                let t = bi.raw_mul_reference(xa[i], ya[j]);
                prod[i + j] = bi.raw_add_reference(prod[i + j], t);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                let t = bi.raw_mul_reference(c, self.modulus[i]);
                prod[k - d + i] = bi.raw_add_reference(prod[k - d + i], bi.neg_digits(t));
            }
            prod[k] = 0;
        }
        let mut r = 0u32;
        for i in (0..d).rev() {
            r = r * b + prod[i];
        }
        r
    }

    fn raw_add_reference(&self, x: u32, y: u32) -> u32 {
        self.add_digits(x, y)
    }

    fn raw_pow_reference(&self, x: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul_reference(acc, b);
            }
            b = self.raw_mul_reference(b, b);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let n = self.order;
        let n1 = n - 1;
        let generator = if n == 2 {
            1
        } else {
            (1..n)
                .find(|&x| {
                    self.group_primes
                        .iter()
                        .all(|&r| self.raw_pow_reference(x, n1 as u64 / r) != 1)
                })
                .expect("multiplicative group of a field is cyclic")
        };
        let mut exp = vec![0u32; 2 * n1 as usize];
        let mut log = vec![NO_LOG; n as usize];
        let mut cur = 1u32;
        for i in 0..n1 {
            exp[i as usize] = cur;
            log[cur as usize] = i;
            cur = self.raw_mul_reference(cur, generator);
        }
        assert_eq!(cur, 1, "generator order mismatch");
        for i in 0..n1 as usize {
            exp[i + n1 as usize] = exp[i];
        }
        let zech = (0..n1)
            .map(|k| {
                let s = self.add_digits(1, exp[k as usize]);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        Tables {
            generator,
            exp,
            log,
            zech,
        }
    }
}

impl FieldCtx {
    /// `F_p` with the default size cap.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::prime_with_cap(p, DEFAULT_CAP)
    }

    pub fn prime_with_cap(p: u64, cap: u64) -> Result<Self, FieldError> {
        if p > cap {
            return Err(FieldError::TooLarge {
                order: p as u128,
                cap,
            });
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self::assemble(p as u32, p as u32, 1, None, Vec::new(), 1))
    }

    /// Degree `d` extension of `base` using the lexicographically smallest
    /// monic irreducible modulus.
    pub fn extension(base: &FieldCtx, d: u32) -> Result<Self, FieldError> {
        Self::extension_with_cap(base, d, DEFAULT_CAP)
    }

    pub fn extension_with_cap(base: &FieldCtx, d: u32, cap: u64) -> Result<Self, FieldError> {
        if d < 2 {
            return Err(FieldError::BadDegree(d));
        }
        let b = base.order() as u64;
        let order = (b as u128).pow(d);
        if order > cap as u128 {
            return Err(FieldError::TooLarge { order, cap });
        }
        let count = b.pow(d);
        for code in 0..count {
            let mut m = Vec::with_capacity(d as usize + 1);
            let mut c = code;
            for _ in 0..d {
                m.push((c % b) as u32);
                c /= b;
            }
            m.push(1);
            if is_irreducible_over(base, &m) {
                return Ok(Self::from_modulus(base, m));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Extension with a caller-supplied modulus (coefficients low degree first).
    pub fn extension_with_modulus(
        base: &FieldCtx,
        modulus: &[FieldElement],
        cap: u64,
    ) -> Result<Self, FieldError> {
        for c in modulus {
            base.check(*c)?;
        }
        if modulus.len() < 3 || modulus.last().map(|c| c.value) != Some(1) {
            return Err(FieldError::BadModulus);
        }
        let d = (modulus.len() - 1) as u32;
        let order = (base.order() as u128).pow(d);
        if order > cap as u128 {
            return Err(FieldError::TooLarge { order, cap });
        }
        let m: Vec<u32> = modulus.iter().map(|c| c.value).collect();
        if !is_irreducible_over(base, &m) {
            return Err(FieldError::NotIrreducible);
        }
        Ok(Self::from_modulus(base, m))
    }

    /// `F_q` for a prime power `q`, built as `F_p` or a degree-`k` extension of it.
    pub fn prime_power(q: u64, cap: u64) -> Result<Self, FieldError> {
        let (p, k) = factor_prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let fp = Self::prime_with_cap(p, cap)?;
        if k == 1 {
            Ok(fp)
        } else {
            Self::extension_with_cap(&fp, k, cap)
        }
    }

    /// The tower `F_q -> F_{q^2}`; returns the quadratic extension.
    pub fn quadratic_over(q: u64, cap: u64) -> Result<Self, FieldError> {
        let fq = Self::prime_power(q, cap)?;
        Self::extension_with_cap(&fq, 2, cap)
    }

    fn from_modulus(base: &FieldCtx, modulus: Vec<u32>) -> Self {
        let d = (modulus.len() - 1) as u32;
        let order = base.order().pow(d);
        let flat = base.inner.flat_digits * d;
        Self::assemble(base.p(), order, d, Some(base.clone()), modulus, flat)
    }

    fn assemble(
        p: u32,
        order: u32,
        degree: u32,
        base: Option<FieldCtx>,
        modulus: Vec<u32>,
        flat_digits: u32,
    ) -> Self {
        let inner = Inner {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            p,
            order,
            degree,
            base,
            modulus,
            flat_digits,
            group_primes: prime_factors(order as u64 - 1),
            tables: OnceLock::new(),
        };
        FieldCtx {
            inner: Arc::new(inner),
        }
    }

    #[inline]
    pub fn id(&self) -> u32 {
        self.inner.id
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Degree over the immediate base (1 for a prime field).
    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn base(&self) -> Option<&FieldCtx> {
        self.inner.base.as_ref()
    }

    /// Order of the immediate base field (`p` for a prime field).
    pub fn base_order(&self) -> u32 {
        self.inner.base_order()
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.base.is_none()
    }

    /// Monic modulus over the base, low degree first. Empty for prime fields.
    pub fn modulus(&self) -> Vec<FieldElement> {
        match &self.inner.base {
            None => Vec::new(),
            Some(b) => self.inner.modulus.iter().map(|&v| b.element(v)).collect(),
        }
    }

    #[inline]
    pub fn check(&self, x: FieldElement) -> Result<(), FieldError> {
        if x.ctx == self.inner.id {
            Ok(())
        } else {
            Err(FieldError::CtxMismatch)
        }
    }

    #[inline]
    fn expect(&self, x: FieldElement) {
        assert!(
            x.ctx == self.inner.id,
            "field element from context {} used in context {}",
            x.ctx,
            self.inner.id
        );
    }

    /// Element by canonical index. Panics if out of range.
    #[inline]
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.inner.order, "index {index} out of range");
        FieldElement {
            ctx: self.inner.id,
            value: index,
        }
    }

    pub fn try_element(&self, index: u64) -> Option<FieldElement> {
        (index < self.inner.order as u64).then(|| self.element(index as u32))
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// The adjoined root `t` of the modulus.
    pub fn adjoined_root(&self) -> Result<FieldElement, FieldError> {
        if self.is_prime_field() {
            return Err(FieldError::NotExtension);
        }
        Ok(self.element(self.base_order()))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.order).map(move |v| self.element(v))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.inner.order).map(move |v| self.element(v))
    }

    /// Coordinates over the immediate base, low degree first.
    pub fn coords(&self, x: FieldElement) -> Vec<FieldElement> {
        self.expect(x);
        match &self.inner.base {
            None => vec![x],
            Some(b) => {
                let bo = b.order();
                let mut v = x.value;
                (0..self.inner.degree)
                    .map(|_| {
                        let c = v % bo;
                        v /= bo;
                        b.element(c)
                    })
                    .collect()
            }
        }
    }

    pub fn from_coords(&self, coords: &[FieldElement]) -> Result<FieldElement, FieldError> {
        match &self.inner.base {
            None => {
                if coords.len() != 1 {
                    return Err(FieldError::CtxMismatch);
                }
                self.check(coords[0])?;
                Ok(coords[0])
            }
            Some(b) => {
                if coords.len() != self.inner.degree as usize {
                    return Err(FieldError::CtxMismatch);
                }
                let bo = b.order();
                let mut v = 0u32;
                for c in coords.iter().rev() {
                    b.check(*c)?;
                    v = v * bo + c.value;
                }
                Ok(self.element(v))
            }
        }
    }

    /// Base element viewed inside this extension.
    pub fn embed(&self, base_elem: FieldElement) -> Result<FieldElement, FieldError> {
        let b = self.base().ok_or(FieldError::NotExtension)?;
        b.check(base_elem)?;
        Ok(self.element(base_elem.value))
    }

    /// Inverse of [`FieldCtx::embed`]; `None` when `x` is not in the base field.
    pub fn restrict(&self, x: FieldElement) -> Option<FieldElement> {
        self.expect(x);
        let b = self.base()?;
        (x.value < b.order()).then(|| b.element(x.value))
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.expect(x);
        self.expect(y);
        self.element_unchecked(self.inner.raw_add(x.value, y.value))
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.expect(x);
        self.expect(y);
        self.element_unchecked(self.inner.raw_sub(x.value, y.value))
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.expect(x);
        self.element_unchecked(self.inner.raw_neg(x.value))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.expect(x);
        self.expect(y);
        self.element_unchecked(self.inner.raw_mul(x.value, y.value))
    }

    /// `x^e` with `0^0 = 1`.
    #[inline]
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        self.expect(x);
        self.element_unchecked(self.inner.raw_pow(x.value, e))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        if x.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.element_unchecked(self.inner.raw_inv(x.value)))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        let yi = self.inv(y)?;
        Ok(self.mul(x, yi))
    }

    pub fn checked_add(
        &self,
        x: FieldElement,
        y: FieldElement,
    ) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add(x, y))
    }

    pub fn checked_sub(
        &self,
        x: FieldElement,
        y: FieldElement,
    ) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sub(x, y))
    }

    pub fn checked_mul(
        &self,
        x: FieldElement,
        y: FieldElement,
    ) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn checked_pow(&self, x: FieldElement, e: u64) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        Ok(self.pow(x, e))
    }

    /// Product computed by polynomial multiplication modulo the tower modulus,
    /// never touching the log tables.
    pub fn mul_reference(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.expect(x);
        self.expect(y);
        self.element_unchecked(self.inner.raw_mul_reference(x.value, y.value))
    }

    /// Square-and-multiply on top of [`FieldCtx::mul_reference`].
    pub fn pow_reference(&self, x: FieldElement, e: u64) -> FieldElement {
        self.expect(x);
        self.element_unchecked(self.inner.raw_pow_reference(x.value, e))
    }

    /// Sum computed digit by digit.
    pub fn add_reference(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.expect(x);
        self.expect(y);
        self.element_unchecked(self.inner.add_digits(x.value, y.value))
    }

    #[inline]
    fn element_unchecked(&self, v: u32) -> FieldElement {
        FieldElement {
            ctx: self.inner.id,
            value: v,
        }
    }

    /// `x^(q^i)` where `q` is the base order, by `i` successive `q`-th powers.
    pub fn frobenius(&self, x: FieldElement, i: u32) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        if self.is_prime_field() {
            return Err(FieldError::NotExtension);
        }
        let q = self.base_order() as u64;
        let mut y = x;
        for _ in 0..i {
            y = self.pow_sqmul(y, q);
        }
        Ok(y)
    }

    fn pow_sqmul(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Relative trace down to the immediate base field.
    pub fn trace(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        let base = self.base().ok_or(FieldError::NotExtension)?;
        let mut sum = self.zero();
        let mut y = x;
        let q = self.base_order() as u64;
        for _ in 0..self.degree() {
            sum = self.add(sum, y);
            y = self.pow_sqmul(y, q);
        }
        if self.pow_sqmul(sum, q) != sum || sum.value >= base.order() {
            return Err(FieldError::TraceNotInBase);
        }
        Ok(base.element(sum.value))
    }

    /// The canonical generator: the first element in enumeration order whose
    /// multiplicative order is `order - 1`.
    pub fn generator(&self) -> FieldElement {
        self.element_unchecked(self.inner.tables().generator)
    }

    /// `g^k` for the canonical generator `g`.
    pub fn generator_power(&self, k: u64) -> FieldElement {
        let t = self.inner.tables();
        let n1 = (self.order() - 1) as u64;
        self.element_unchecked(t.exp[(k % n1) as usize])
    }

    /// Discrete log with respect to the canonical generator.
    pub fn log(&self, x: FieldElement) -> Result<u32, FieldError> {
        self.check(x)?;
        if x.value == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.inner.tables().log[x.value as usize])
    }

    /// Least `t >= 1` with `x^t = 1`.
    pub fn element_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        self.check(x)?;
        if x.value == 0 {
            return Err(FieldError::ZeroElement);
        }
        let mut t = (self.order() - 1) as u64;
        for &r in &self.inner.group_primes {
            while t.is_multiple_of(r) && self.pow(x, t / r) == self.one() {
                t /= r;
            }
        }
        Ok(t)
    }

    /// The `d`-th roots of unity as `g^((N-1)/d * j)`, `j = 0..d`.
    pub fn subgroup_mu(&self, d: u64) -> Result<Vec<FieldElement>, FieldError> {
        let n1 = (self.order() - 1) as u64;
        if d == 0 || !n1.is_multiple_of(d) {
            return Err(FieldError::NotDivisor { d, group: n1 });
        }
        let step = n1 / d;
        Ok((0..d).map(|j| self.generator_power(step * j)).collect())
    }

    /// The canonical element of order 3, `g^((N-1)/3)`.
    pub fn find_order3(&self) -> Result<FieldElement, FieldError> {
        if self.p() == 3 {
            return Err(FieldError::CharThree);
        }
        let n1 = (self.order() - 1) as u64;
        if !n1.is_multiple_of(3) {
            return Err(FieldError::NotDivisor { d: 3, group: n1 });
        }
        Ok(self.generator_power(n1 / 3))
    }

    /// The canonical `a = g^t` with `a^(q-1) = lambda`, where `q` is the base order.
    pub fn solve_power_q_minus_1(&self, lambda: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(lambda)?;
        if self.is_prime_field() {
            return Err(FieldError::NotExtension);
        }
        let q1 = (self.base_order() - 1) as u64;
        let image = (self.order() - 1) as u64 / q1;
        if lambda.value == 0 || self.pow(lambda, image) != self.one() {
            return Err(FieldError::NoSolution);
        }
        let w = self.generator_power(q1);
        let mut cur = self.one();
        for t in 0..image {
            if cur == lambda {
                return Ok(self.generator_power(t));
            }
            cur = self.mul(cur, w);
        }
        Err(FieldError::NoSolution)
    }

    /// Canonical text: an integer for prime fields, otherwise the coordinate
    /// tuple with each coordinate written as its base index.
    pub fn format_element(&self, x: FieldElement) -> String {
        self.expect(x);
        if self.is_prime_field() {
            return x.value.to_string();
        }
        let parts: Vec<String> = self
            .coords(x)
            .iter()
            .map(|c| c.index().to_string())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Parses `7`, `(2,3)`, nested tuples such as `((1,0),(0,1))`, or the
    /// generator alias `a<k>`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, FieldError> {
        let s = text.trim();
        let err = |reason: &str| FieldError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some(k) = s.strip_prefix('a') {
            let k: u64 = k.parse().map_err(|_| err("bad generator alias"))?;
            return Ok(self.generator_power(k));
        }
        if let Some(body) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let body = body.trim();
            if body.starts_with('a') {
                return self.parse_element(body);
            }
            let base = self
                .base()
                .ok_or_else(|| err("tuple given for a prime field"))?;
            let parts = split_top_level(body);
            if parts.len() != self.degree() as usize {
                return Err(err("wrong number of coordinates"));
            }
            let coords = parts
                .iter()
                .map(|p| base.parse_coordinate(p))
                .collect::<Result<Vec<_>, _>>()?;
            return self.from_coords(&coords);
        }
        let n: i64 = s
            .parse()
            .map_err(|_| err("expected integer, tuple or a<k>"))?;
        Ok(self.from_int(n))
    }

    // A coordinate is either an integer index or a nested element form.
    fn parse_coordinate(&self, text: &str) -> Result<FieldElement, FieldError> {
        let s = text.trim();
        if let Ok(v) = s.parse::<u64>() {
            return self.try_element(v).ok_or_else(|| FieldError::Parse {
                text: text.to_string(),
                reason: format!("coordinate {v} out of range for F_{}", self.order()),
            });
        }
        self.parse_element(s)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Field description used by the command line: `p=<prime>[,k=<int>][,n=<int>]`
/// optionally followed by `mod=[c0,c1,...,1]` for the top extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let err = |reason: String| FieldError::Parse {
            text: text.to_string(),
            reason,
        };
        let mut p = None;
        let mut k = 1u32;
        let mut n = 1u32;
        let mut modulus = None;
        let mut rest = text.trim();
        while !rest.is_empty() {
            let (key, after) = rest
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value near `{rest}`")))?;
            let key = key.trim();
            let after = after.trim_start();
            let (value, tail) = if after.starts_with('[') {
                let close = after
                    .find(']')
                    .ok_or_else(|| err("unterminated modulus list".into()))?;
                (&after[..=close], &after[close + 1..])
            } else {
                match after.find(',') {
                    Some(i) => (&after[..i], &after[i..]),
                    None => (after, ""),
                }
            };
            let tail = tail.trim_start();
            rest = tail.strip_prefix(',').unwrap_or(tail).trim_start();
            let int = |v: &str| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| err(format!("`{v}` is not an integer")))
            };
            match key {
                "p" => p = Some(int(value)?),
                "k" => k = int(value)? as u32,
                "n" => n = int(value)? as u32,
                "mod" => {
                    let inner = value.trim_start_matches('[').trim_end_matches(']');
                    let coeffs = inner.split(',').map(int).collect::<Result<Vec<_>, _>>()?;
                    modulus = Some(coeffs);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| err("missing p=".into()))?;
        if k == 0 || n == 0 {
            return Err(err("k and n must be positive".into()));
        }
        Ok(FieldSpec { p, k, n, modulus })
    }

    /// Builds the tower; the explicit modulus, if any, applies to the top level.
    pub fn build(&self, cap: u64) -> Result<FieldCtx, FieldError> {
        let fp = FieldCtx::prime_with_cap(self.p, cap)?;
        let levels: Vec<u32> = [self.k, self.n].into_iter().filter(|&d| d > 1).collect();
        let mut cur = fp;
        for (i, &d) in levels.iter().enumerate() {
            let top = i + 1 == levels.len();
            cur = match (&self.modulus, top) {
                (Some(m), true) => {
                    let coeffs = m
                        .iter()
                        .map(|&c| cur.try_element(c).ok_or(FieldError::BadModulus))
                        .collect::<Result<Vec<_>, _>>()?;
                    if coeffs.len() != d as usize + 1 {
                        return Err(FieldError::BadModulus);
                    }
                    FieldCtx::extension_with_modulus(&cur, &coeffs, cap)?
                }
                _ => FieldCtx::extension_with_cap(&cur, d, cap)?,
            };
        }
        if self.modulus.is_some() && levels.is_empty() {
            return Err(FieldError::BadModulus);
        }
        Ok(cur)
    }
}
