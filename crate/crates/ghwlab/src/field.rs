//! Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_Q with precomputed
//! log/antilog tables, trace maps and a tabulated subfield view.
//!
//! Elements of F_Q are stored packed: the coefficient vector
//! (c_0, ..., c_{d-1}) over F_p becomes the integer Σ c_i p^i, so the
//! packed value ranges over 0..Q. Nonzero elements also carry an implicit
//! discrete-log index through the log table, which gives O(1)
//! multiplication; addition works digit-wise on the packed value.

use crate::error::FieldError;

/// Default bound on the number of field elements that may be tabulated.
pub const DEFAULT_TABLE_BOUND: u64 = 1 << 20;

/// Largest mid-field order for which the q-by-q operation tables are built.
pub const SUBFIELD_TABLE_LIMIT: u64 = 1024;

const NO_LOG: u32 = u32::MAX;
const NO_INDEX: u16 = u16::MAX;

/// A packed element of the big field F_Q.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

// ---------------------------------------------------------------------------
// Construction-time polynomial arithmetic over F_p (coefficients low..high).

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn prem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        for i in 0..=df {
            let idx = shift + i;
            let sub = (lead * f[i]) % p;
            r[idx] = (r[idx] + p - sub) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pmulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    prem(&pmul(a, b, p), f, p)
}

fn ppowmod(a: &[u64], mut k: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = prem(a, f, p);
    let mut acc = vec![1u64];
    while k > 0 {
        if k & 1 == 1 {
            acc = pmulmod(&acc, &base, f, p);
        }
        base = pmulmod(&base, &base, f, p);
        k >>= 1;
    }
    acc
}

/// Exhaustive irreducibility test: trial division by every monic
/// polynomial of degree 1..=deg/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for dd in 1..=d / 2 {
        let count = p.pow(dd as u32);
        for tail in 0..count {
            let mut g = digits(tail, p, dd);
            g.push(1);
            if prem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
    }
    out
}

fn pack(digs: &[u64], p: u64) -> u32 {
    let mut v: u64 = 0;
    for &d in digs.iter().rev() {
        v = v * p + d;
    }
    v as u32
}

// ---------------------------------------------------------------------------

/// Tabulated view of the mid field F_q sitting inside F_Q.
///
/// Index 0 is zero; index j in 1..q is γ^{(j-1)(Q-1)/(q-1)}. The add, mul,
/// neg and inv tables close the arithmetic over these small indices.
pub struct SubfieldTable {
    q: u64,
    step: u64,
    elems: Vec<u32>,
    index_of: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl SubfieldTable {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> u16 {
        0
    }

    pub fn one(&self) -> u16 {
        1
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    /// The big-field element carried by a small index.
    pub fn lift(&self, a: u16) -> Fe {
        Fe(self.elems[a as usize])
    }

    /// Small index of a big-field element, if it lies in the subfield.
    pub fn index_of(&self, x: Fe) -> Option<u16> {
        let i = self.index_of[x.0 as usize];
        if i == NO_INDEX {
            None
        } else {
            Some(i)
        }
    }

    /// Exponent step of the subfield generator inside F_Q.
    pub fn step(&self) -> u64 {
        self.step
    }
}

/// A fully tabulated finite field F_Q = F_{p^{sm}} with its F_q = F_{p^s}
/// subfield view. Immutable after construction.
pub struct FieldSpec {
    p: u64,
    s: u32,
    m: u32,
    q: u64,
    order: u64,
    modulus: Vec<u64>,
    gamma: Fe,
    antilog: Vec<u32>,
    log: Vec<u32>,
    trace_base: Vec<u32>,
    sub: SubfieldTable,
    variant: u32,
}

/// Deterministic construction: lexicographically smallest irreducible
/// defining polynomial, then smallest-index primitive element.
pub fn build_field(p: u64, s: u32, m: u32) -> Result<FieldSpec, FieldError> {
    build_field_variant(p, s, m, 0, DEFAULT_TABLE_BOUND)
}

/// Like [`build_field`] but selecting an alternative deterministic
/// construction (`variant = 1`: next irreducible polynomial, or next
/// primitive element when only one polynomial exists).
pub fn build_field_variant(
    p: u64,
    s: u32,
    m: u32,
    variant: u32,
    table_bound: u64,
) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NonPrime(p));
    }
    if s == 0 || m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let d = (s * m) as usize;
    let order = (p as u128).checked_pow(d as u32).ok_or(FieldError::TableBound {
        needed: u128::MAX,
        bound: table_bound,
    })?;
    if order > table_bound as u128 {
        return Err(FieldError::TableBound {
            needed: order,
            bound: table_bound,
        });
    }
    let order = order as u64;
    let q = p.pow(s);
    if q > SUBFIELD_TABLE_LIMIT {
        return Err(FieldError::SubfieldBound(q));
    }

    // Defining polynomial: monic irreducibles of degree d in ascending
    // packed order of their low coefficients.
    let poly_rank = if variant > 0 && d > 1 { 1 } else { 0 };
    let mut modulus = None;
    let mut seen = 0usize;
    for tail in 0..p.pow(d as u32) {
        let mut f = digits(tail, p, d);
        f.push(1);
        if is_irreducible(&f, p) {
            if seen == poly_rank {
                modulus = Some(f);
                break;
            }
            seen += 1;
        }
    }
    let modulus = modulus.ok_or(FieldError::NoAlternative)?;

    // Primitive element: smallest packed value whose order is Q-1.
    let prim_rank = if variant > 0 && d == 1 { 1 } else { 0 };
    let factors = prime_factors(order - 1);
    let mut gamma_digits = None;
    let mut seen = 0usize;
    for v in 1..order {
        let cand = digits(v, p, d);
        let primitive = order == 2
            || factors
                .iter()
                .all(|&f| ppowmod(&cand, (order - 1) / f, &modulus, p) != vec![1]);
        if primitive {
            if seen == prim_rank {
                gamma_digits = Some(cand);
                break;
            }
            seen += 1;
        }
    }
    let gamma_digits = gamma_digits.ok_or(FieldError::NoAlternative)?;
    let gamma = Fe(pack(&gamma_digits, p));

    // Antilog table: successive powers of γ.
    let mut antilog = Vec::with_capacity((order - 1) as usize);
    let mut cur = vec![1u64];
    for _ in 0..order - 1 {
        antilog.push(pack(&cur, p));
        cur = pmulmod(&cur, &gamma_digits, &modulus, p);
    }
    debug_assert_eq!(cur, vec![1u64], "gamma does not have order Q-1");

    let mut log = vec![NO_LOG; order as usize];
    for (i, &v) in antilog.iter().enumerate() {
        log[v as usize] = i as u32;
    }
    debug_assert!(log[1..].iter().all(|&l| l != NO_LOG));

    // Trace to F_p by linearity over the power basis.
    let mut tr_basis = vec![0u64; d];
    for (i, slot) in tr_basis.iter_mut().enumerate() {
        let mut e = vec![0u64; i + 1];
        e[i] = 1;
        let mut acc = vec![0u64];
        for j in 0..d {
            let term = ppowmod(&e, p.pow(j as u32), &modulus, p);
            // trace terms are reduced mod the modulus; add coefficient-wise
            let len = acc.len().max(term.len());
            acc.resize(len, 0);
            for (k, &c) in term.iter().enumerate() {
                acc[k] = (acc[k] + c) % p;
            }
        }
        ptrim(&mut acc);
        assert!(acc.len() <= 1, "absolute trace left the prime field");
        *slot = acc.first().copied().unwrap_or(0);
    }
    let mut trace_base = vec![0u32; order as usize];
    for (v, slot) in trace_base.iter_mut().enumerate() {
        let digs = digits(v as u64, p, d);
        let mut t = 0u64;
        for (c, &tb) in digs.iter().zip(&tr_basis) {
            t = (t + c * tb) % p;
        }
        *slot = t as u32;
    }

    // Subfield view F_q = ⟨γ^{(Q-1)/(q-1)}⟩ ∪ {0}.
    let step = (order - 1) / (q - 1);
    let qe = q as usize;
    let mut elems = vec![0u32; qe];
    let mut index_of = vec![NO_INDEX; order as usize];
    index_of[0] = 0;
    for j in 1..qe {
        let packed = antilog[((j as u64 - 1) * step % (order - 1)) as usize];
        elems[j] = packed;
        index_of[packed as usize] = j as u16;
    }

    let addp = |a: u32, b: u32| -> u32 {
        let da = digits(a as u64, p, d);
        let db = digits(b as u64, p, d);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
        pack(&sum, p)
    };
    let mut add = vec![0u16; qe * qe];
    let mut mul = vec![0u16; qe * qe];
    let mut neg = vec![0u16; qe];
    let mut inv = vec![0u16; qe];
    for a in 0..qe {
        for b in 0..qe {
            let sum = addp(elems[a], elems[b]);
            add[a * qe + b] = index_of[sum as usize];
            mul[a * qe + b] = if a == 0 || b == 0 {
                0
            } else {
                let la = (a as u64 - 1) * step;
                let lb = (b as u64 - 1) * step;
                index_of[antilog[((la + lb) % (order - 1)) as usize] as usize]
            };
            debug_assert!(add[a * qe + b] != NO_INDEX, "subfield not closed under +");
        }
    }
    for a in 1..qe {
        let la = (a as u64 - 1) * step % (order - 1);
        let negd: Vec<u64> = digits(elems[a] as u64, p, d)
            .iter()
            .map(|&x| (p - x) % p)
            .collect();
        neg[a] = index_of[pack(&negd, p) as usize];
        let li = ((order - 1) - la) % (order - 1);
        inv[a] = index_of[antilog[li as usize] as usize];
    }

    let sub = SubfieldTable {
        q,
        step,
        elems,
        index_of,
        add,
        mul,
        neg,
        inv,
    };

    Ok(FieldSpec {
        p,
        s,
        m,
        q,
        order,
        modulus,
        gamma,
        antilog,
        log,
        trace_base,
        sub,
        variant,
    })
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The big-field order Q = q^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn gamma(&self) -> Fe {
        self.gamma
    }

    pub fn variant(&self) -> u32 {
        self.variant
    }

    /// Coefficients of the defining polynomial, low to high.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn subfield(&self) -> &SubfieldTable {
        &self.sub
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += (x % p + y % p) % p * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Fe(out as u32)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.p;
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            out += (p - x % p) % p * place;
            place *= p;
            x /= p;
        }
        Fe(out as u32)
    }

    pub fn sub_elem(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let la = self.log[a.0 as usize] as u64;
        let lb = self.log[b.0 as usize] as u64;
        Fe(self.antilog[((la + lb) % (self.order - 1)) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let la = self.log[a.0 as usize] as u64;
        let n = self.order - 1;
        Fe(self.antilog[((n - la % n) % n) as usize])
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if a.is_zero() {
            return if k == 0 { Fe::ONE } else { Fe::ZERO };
        }
        let la = self.log[a.0 as usize] as u128;
        let n = (self.order - 1) as u128;
        Fe(self.antilog[((la * k as u128) % n) as usize])
    }

    /// γ^k for any exponent, reduced mod Q-1.
    pub fn gamma_pow(&self, k: u64) -> Fe {
        Fe(self.antilog[(k % (self.order - 1)) as usize])
    }

    /// Discrete log base γ of a nonzero element, in [0, Q-2].
    pub fn discrete_log(&self, a: Fe) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroLog);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    /// Absolute trace Tr_{Q→p}, returned as an element of F_p in 0..p.
    pub fn trace_to_base(&self, a: Fe) -> u64 {
        self.trace_base[a.0 as usize] as u64
    }

    /// Relative trace Tr_{Q→q}, returned as a subfield index.
    pub fn trace_to_mid(&self, a: Fe) -> u16 {
        if a.is_zero() {
            return 0;
        }
        let la = self.log[a.0 as usize] as u128;
        let n = (self.order - 1) as u128;
        let mut acc = Fe::ZERO;
        let mut qe: u128 = 1;
        for _ in 0..self.m {
            let term = Fe(self.antilog[((la * qe) % n) as usize]);
            acc = self.add(acc, term);
            qe = (qe * self.q as u128) % n;
        }
        self.sub
            .index_of(acc)
            .expect("relative trace left the mid field")
    }
}
