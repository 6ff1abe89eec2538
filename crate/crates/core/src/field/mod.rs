//! Small finite fields with explicit arithmetic tables, and the 2x2/4x4
//! matrices over them used to build projective and symplectic group actions.
//!
//! Elements of F_{p^m} are indices 0..p^m encoding coefficient vectors in
//! base p (low digit = constant term). The modulus is the least monic
//! irreducible of its degree in this encoding, so every construction is
//! deterministic. Fields here are tiny (q <= a few thousand), which makes
//! full multiplication tables the simplest correct representation.

pub mod actions;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("t^2 + {a}t - 1 is reducible over F_{q}")]
    ReducibleModulus { a: u16, q: u16 },
    #[error("degree {0} is too small for the requested action")]
    DegenerateDegree(usize),
    #[error("generator image violates the symplectic form A'BA = B")]
    EmbeddingCheckFailed,
    #[error("internal field invariant violated: {0}")]
    Internal(String),
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor a prime power q = p^m; None when q is not one.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = 0;
            let mut rest = q;
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            return (rest == 1).then_some((p, m));
        }
        p += 1;
    }
    Some((q, 1))
}

/// F_{p^m} with full add/mul tables. `quadratic_extension` builds F_{q^2}
/// over an existing field with modulus t^2 + at - 1, keeping track of the
/// subfield so elements can be split back into coordinates.
pub struct Fq {
    p: u32,
    m: u32,
    q: u16,
    /// Modulus coefficients c_0..c_m (monic, c_m = 1); empty for m = 1 and
    /// for extension-built fields, whose reduction rule lives in `sub`.
    modulus: Vec<u32>,
    /// Some((subfield order, a)) when built as K[t]/(t^2 + at - 1).
    sub: Option<(u16, u16)>,
    add_t: Vec<u16>,
    mul_t: Vec<u16>,
    inv_t: Vec<u16>,
    neg_t: Vec<u16>,
    primitive: u16,
}

fn poly_mul_mod(p: u32, modulus: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // Reduce: x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1}).
    for d in (m..prod.len()).rev() {
        let lead = prod[d];
        if lead == 0 {
            continue;
        }
        prod[d] = 0;
        for (k, &c) in modulus.iter().take(m).enumerate() {
            let sub = (lead * c) % p;
            prod[d - m + k] = (prod[d - m + k] + p - sub) % p;
        }
    }
    prod.truncate(m.max(1));
    prod
}

fn encode(p: u32, coeffs: &[u32]) -> u16 {
    let mut v = 0u32;
    for &c in coeffs.iter().rev() {
        v = v * p + c;
    }
    v as u16
}

fn decode(p: u32, m: u32, mut v: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

impl Fq {
    pub fn new(p: u32, m: u32) -> Result<Fq, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        assert!(m >= 1, "extension degree must be positive");
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= u16::MAX as u32)
            .expect("field order fits in u16") as u16;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            Self::least_irreducible(p, m)
        };
        let mul_mod = modulus.clone();
        let mul_fn = move |a: u16, b: u16| {
            if m == 1 {
                ((a as u32 * b as u32) % p) as u16
            } else {
                let pa = decode(p, m, a as u32);
                let pb = decode(p, m, b as u32);
                encode(p, &poly_mul_mod(p, &mul_mod, &pa, &pb))
            }
        };
        let add_fn = move |a: u16, b: u16| {
            let pa = decode(p, m, a as u32);
            let pb = decode(p, m, b as u32);
            let sum: Vec<u32> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
            encode(p, &sum)
        };
        Ok(Self::from_ops(p, m, q, modulus, None, &add_fn, &mul_fn))
    }

    /// K[t]/(t^2 + at - 1) over `base`; fails when the modulus has a root.
    pub fn quadratic_extension(base: &Fq, a: u16) -> Result<Fq, FieldError> {
        let k = base.q;
        for t in 0..k {
            // t^2 + a t - 1 = 0?
            let val = base.add(base.add(base.mul(t, t), base.mul(a, t)), base.neg(1));
            if val == 0 {
                return Err(FieldError::ReducibleModulus { a, q: k });
            }
        }
        let q = (k as u32) * (k as u32);
        assert!(q <= u16::MAX as u32, "extension order fits in u16");
        // Element x1 + x2*t has index x1 + x2*k; t^2 = 1 - a*t.
        let add_fn = |x: u16, y: u16| {
            let (x1, x2) = (x % k, x / k);
            let (y1, y2) = (y % k, y / k);
            base.add(x1, y1) + base.add(x2, y2) * k
        };
        let mul_fn = |x: u16, y: u16| {
            let (x1, x2) = (x % k, x / k);
            let (y1, y2) = (y % k, y / k);
            let cross = base.mul(x2, y2);
            let first = base.add(base.mul(x1, y1), cross);
            let second = base.sub(
                base.add(base.mul(x1, y2), base.mul(x2, y1)),
                base.mul(a, cross),
            );
            first + second * k
        };
        Ok(Self::from_ops(
            base.p,
            2 * base.m,
            q as u16,
            Vec::new(),
            Some((k, a)),
            &add_fn,
            &mul_fn,
        ))
    }

    fn from_ops(
        p: u32,
        m: u32,
        q: u16,
        modulus: Vec<u32>,
        sub: Option<(u16, u16)>,
        add_fn: &dyn Fn(u16, u16) -> u16,
        mul_fn: &dyn Fn(u16, u16) -> u16,
    ) -> Fq {
        let n = q as usize;
        let mut add_t = vec![0u16; n * n];
        let mut mul_t = vec![0u16; n * n];
        for a in 0..q {
            for b in 0..q {
                add_t[a as usize * n + b as usize] = add_fn(a, b);
                mul_t[a as usize * n + b as usize] = mul_fn(a, b);
            }
        }
        let mut neg_t = vec![0u16; n];
        for a in 0..q {
            for b in 0..q {
                if add_t[a as usize * n + b as usize] == 0 {
                    neg_t[a as usize] = b;
                }
            }
        }
        let mut inv_t = vec![0u16; n];
        for a in 1..q {
            for b in 1..q {
                if mul_t[a as usize * n + b as usize] == 1 {
                    inv_t[a as usize] = b;
                }
            }
        }
        assert!(
            (1..q).all(|a| inv_t[a as usize] != 0),
            "every nonzero element must be invertible"
        );
        let mut field = Fq {
            p,
            m,
            q,
            modulus,
            sub,
            add_t,
            mul_t,
            inv_t,
            neg_t,
            primitive: 0,
        };
        field.primitive = (1..q)
            .find(|&g| field.mult_order(g) == q as u32 - 1)
            .expect("a finite field has a primitive element");
        field
    }

    fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
        for v in 0..p.pow(m) {
            let mut coeffs = decode(p, m, v);
            coeffs.push(1);
            if irreducible(p, &coeffs) {
                return coeffs;
            }
        }
        unreachable!("irreducibles of every degree exist over F_p")
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u16 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn primitive(&self) -> u16 {
        self.primitive
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add_t[a as usize * self.q as usize + b as usize]
    }
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul_t[a as usize * self.q as usize + b as usize]
    }
    pub fn neg(&self, a: u16) -> u16 {
        self.neg_t[a as usize]
    }
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        self.inv_t[a as usize]
    }
    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    pub fn mult_order(&self, a: u16) -> u32 {
        assert!(a != 0);
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn pow(&self, a: u16, e: u32) -> u16 {
        let mut acc = 1u16;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// An F_p-basis of the field as element indices.
    pub fn fp_basis(&self) -> Vec<u16> {
        match self.sub {
            None => (0..self.m).map(|j| self.p.pow(j) as u16).collect(),
            Some((k, _)) => {
                let e = self.m / 2;
                let mut basis: Vec<u16> = (0..e).map(|j| self.p.pow(j) as u16).collect();
                basis.extend((0..e).map(|j| (self.p.pow(j) as u16) * k));
                basis
            }
        }
    }

    /// Coordinates (x1, x2) with element = x1 + x2*t over the subfield.
    /// Panics for fields not built as quadratic extensions.
    pub fn split(&self, x: u16) -> (u16, u16) {
        let (k, _) = self.sub.expect("split requires an extension field");
        (x % k, x / k)
    }

    /// Subfield order and the modulus coefficient a, for extension fields.
    pub fn extension_data(&self) -> Option<(u16, u16)> {
        self.sub
    }
}

fn irreducible(p: u32, coeffs_with_lead: &[u32]) -> bool {
    let m = coeffs_with_lead.len() - 1;
    for d in 1..=m / 2 {
        for v in 0..p.pow(d as u32) {
            let mut div = decode(p, d as u32, v);
            div.push(1);
            let mut rem = coeffs_with_lead.to_vec();
            for top in (d..rem.len()).rev() {
                let f = rem[top];
                if f == 0 {
                    continue;
                }
                rem[top] = 0;
                for (k, &c) in div.iter().take(d).enumerate() {
                    let sub = (f * c) % p;
                    rem[top - d + k] = (rem[top - d + k] + p - sub) % p;
                }
            }
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Row-major 2x2 matrix of field element indices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat2(pub [u16; 4]);

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2([1, 0, 0, 1])
    }
    pub fn mul(f: &Fq, a: Mat2, b: Mat2) -> Mat2 {
        let mut c = [0u16; 4];
        for i in 0..2 {
            for j in 0..2 {
                let mut s = 0u16;
                for k in 0..2 {
                    s = f.add(s, f.mul(a.0[i * 2 + k], b.0[k * 2 + j]));
                }
                c[i * 2 + j] = s;
            }
        }
        Mat2(c)
    }
    pub fn det(&self, f: &Fq) -> u16 {
        f.sub(f.mul(self.0[0], self.0[3]), f.mul(self.0[1], self.0[2]))
    }
}

/// Row-major 4x4 matrix of field element indices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat4(pub [u16; 16]);

impl Mat4 {
    pub fn identity() -> Mat4 {
        let mut m = [0u16; 16];
        for i in 0..4 {
            m[i * 4 + i] = 1;
        }
        Mat4(m)
    }
    pub fn mul(f: &Fq, a: Mat4, b: Mat4) -> Mat4 {
        let mut c = [0u16; 16];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0u16;
                for k in 0..4 {
                    s = f.add(s, f.mul(a.0[i * 4 + k], b.0[k * 4 + j]));
                }
                c[i * 4 + j] = s;
            }
        }
        Mat4(c)
    }
    pub fn transpose(&self) -> Mat4 {
        let mut t = [0u16; 16];
        for i in 0..4 {
            for j in 0..4 {
                t[j * 4 + i] = self.0[i * 4 + j];
            }
        }
        Mat4(t)
    }
    pub fn apply(&self, f: &Fq, v: [u16; 4]) -> [u16; 4] {
        let mut out = [0u16; 4];
        for i in 0..4 {
            let mut s = 0u16;
            for k in 0..4 {
                s = f.add(s, f.mul(self.0[i * 4 + k], v[k]));
            }
            out[i] = s;
        }
        out
    }
}

/// The standard symplectic form [[0, I], [-I, 0]].
pub fn symplectic_form(f: &Fq) -> Mat4 {
    let n1 = f.neg(1);
    let mut b = [0u16; 16];
    b[2] = 1;
    b[1 * 4 + 3] = 1;
    b[2 * 4 + 0] = n1;
    b[3 * 4 + 1] = n1;
    Mat4(b)
}
