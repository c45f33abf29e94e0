//! Short-Weierstrass curves over small prime fields.
//!
//! The group is written multiplicatively to match the usual key-exchange
//! notation: [`compose`] is the group law and [`point_pow`] repeated
//! composition. Orders come from exhaustive enumeration, so everything here
//! is desk scale (p well below 2³²).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::modnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveParams {
    p: u64,
    a: u64,
    b: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => f.write_str("N"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl CurvePoint {
    pub fn affine(x: u64, y: u64) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn x(&self) -> Option<u64> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(*x),
        }
    }
}

const MAX_FIELD: u64 = 1 << 32;

impl CurveParams {
    pub fn new(p: u64, a: u64, b: u64) -> Result<Self> {
        if p <= 3 || !modnum::is_prime(p as i128) {
            return Err(Error::domain(format!("field characteristic {p} must be a prime > 3")));
        }
        if p >= MAX_FIELD {
            return Err(Error::Unsupported(format!("field size {p} beyond desk scale")));
        }
        let c = CurveParams { p, a: a % p, b: b % p };
        let disc = c.add(c.mul(4, c.mul(c.a, c.mul(c.a, c.a))), c.mul(27, c.mul(c.b, c.b)));
        if disc == 0 {
            return Err(Error::domain("singular curve: 4a^3 + 27b^2 = 0"));
        }
        Ok(c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }

    fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y) % self.p
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.p
    }

    fn inv(&self, x: u64) -> u64 {
        modnum::mod_inverse(x as i64, self.p as i64).expect("nonzero field element").into_value() as u64
    }

    fn rhs(&self, x: u64) -> u64 {
        self.add(self.add(self.mul(x, self.mul(x, x)), self.mul(self.a, x)), self.b)
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}x + {} over F_{}", self.a, self.b, self.p)
    }
}

/// Named desk curves with a generator of prime order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvePreset {
    pub name: &'static str,
    pub curve: CurveParams,
    pub generator: CurvePoint,
    pub order: u64,
}

pub const PRESET_NAMES: [&str; 2] = ["f97", "p10007"];

pub fn preset(name: &str) -> Result<CurvePreset> {
    let (name, p, a, b, gx, gy, order) = match name {
        "f97" => ("f97", 97, 1, 4, 0, 2, 89),
        "p10007" => ("p10007", 10007, 1, 28, 2, 4582, 9851),
        other => return Err(Error::UnknownScheme(format!("curve preset {other}"))),
    };
    Ok(CurvePreset {
        name,
        curve: CurveParams::new(p, a, b)?,
        generator: CurvePoint::affine(gx, gy),
        order,
    })
}

pub fn on_curve(pt: &CurvePoint, c: &CurveParams) -> bool {
    match *pt {
        CurvePoint::Infinity => true,
        CurvePoint::Affine { x, y } => x < c.p && y < c.p && c.mul(y, y) == c.rhs(x),
    }
}

fn check(pt: &CurvePoint, c: &CurveParams) -> Result<()> {
    if on_curve(pt, c) {
        Ok(())
    } else {
        Err(Error::domain(format!("point {pt} is not on {c}")))
    }
}

/// Reflection across the x-axis.
pub fn inverse(pt: &CurvePoint, c: &CurveParams) -> CurvePoint {
    match *pt {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::affine(x, c.sub(0, y)),
    }
}

/// The group law: chord rule, tangent rule, vertical lines to the point at
/// infinity, which is the neutral element.
pub fn compose(pt: &CurvePoint, other: &CurvePoint, c: &CurveParams) -> Result<CurvePoint> {
    check(pt, c)?;
    check(other, c)?;
    Ok(compose_unchecked(pt, other, c))
}

fn compose_unchecked(pt: &CurvePoint, other: &CurvePoint, c: &CurveParams) -> CurvePoint {
    let (x1, y1, x2, y2) = match (*pt, *other) {
        (CurvePoint::Infinity, q) => return q,
        (q, CurvePoint::Infinity) => return q,
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    let slope = if x1 != x2 {
        c.mul(c.sub(y2, y1), c.inv(c.sub(x2, x1)))
    } else if y1 == y2 && y1 != 0 {
        let num = c.add(c.mul(3, c.mul(x1, x1)), c.a);
        c.mul(num, c.inv(c.mul(2, y1)))
    } else {
        // P ∘ P⁻¹, including doubling a point with y = 0
        return CurvePoint::Infinity;
    };
    let x3 = c.sub(c.sub(c.mul(slope, slope), x1), x2);
    let y3 = c.sub(c.mul(slope, c.sub(x1, x3)), y1);
    CurvePoint::affine(x3, y3)
}

/// `G` composed with itself `s` times (square-and-multiply). `s = 0` gives
/// the neutral element.
pub fn point_pow(g: &CurvePoint, s: u64, c: &CurveParams) -> Result<CurvePoint> {
    check(g, c)?;
    let mut acc = CurvePoint::Infinity;
    let mut base = *g;
    let mut e = s;
    while e > 0 {
        if e & 1 == 1 {
            acc = compose_unchecked(&acc, &base, c);
        }
        e >>= 1;
        if e > 0 {
            base = compose_unchecked(&base, &base, c);
        }
    }
    Ok(acc)
}

/// All points of the curve, infinity first, then affine points sorted.
pub fn enumerate_points(c: &CurveParams) -> Vec<CurvePoint> {
    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); c.p as usize];
    for y in 0..c.p {
        roots[c.mul(y, y) as usize].push(y);
    }
    let mut pts = vec![CurvePoint::Infinity];
    for x in 0..c.p {
        for &y in &roots[c.rhs(x) as usize] {
            pts.push(CurvePoint::affine(x, y));
        }
    }
    pts
}

/// Order of `g` by walking its cyclic subgroup.
pub fn point_order(g: &CurvePoint, c: &CurveParams) -> Result<u64> {
    check(g, c)?;
    let mut acc = *g;
    let mut k = 1;
    while acc != CurvePoint::Infinity {
        acc = compose_unchecked(&acc, g, c);
        k += 1;
    }
    Ok(k)
}

/// Smallest `s ≥ 1` with `G^s = P`.
pub fn ec_dlog_bruteforce(g: &CurvePoint, pt: &CurvePoint, c: &CurveParams) -> Result<u64> {
    check(g, c)?;
    check(pt, c)?;
    let mut acc = *g;
    let mut s = 1;
    loop {
        if acc == *pt {
            return Ok(s);
        }
        if acc == CurvePoint::Infinity {
            return Err(Error::NoLogarithm);
        }
        acc = compose_unchecked(&acc, g, c);
        s += 1;
    }
}

pub fn ecdh_public(g: &CurvePoint, private: u64, c: &CurveParams) -> Result<CurvePoint> {
    point_pow(g, private, c)
}

/// `their_public^my_private`.
pub fn ecdh_shared(my_private: u64, their_public: &CurvePoint, c: &CurveParams) -> Result<CurvePoint> {
    point_pow(their_public, my_private, c)
}

/// Domain parameters for signing: a generator of known prime order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EcdsaDomain {
    pub curve: CurveParams,
    pub generator: CurvePoint,
    pub order: u64,
}

impl EcdsaDomain {
    pub fn new(curve: CurveParams, generator: CurvePoint) -> Result<Self> {
        let order = point_order(&generator, &curve)?;
        if !modnum::is_prime(order as i128) {
            return Err(Error::domain(format!("generator order {order} is not prime")));
        }
        Ok(EcdsaDomain { curve, generator, order })
    }
}

impl From<CurvePreset> for EcdsaDomain {
    fn from(p: CurvePreset) -> Self {
        EcdsaDomain { curve: p.curve, generator: p.generator, order: p.order }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EcdsaSignature {
    pub r: u64,
    pub s: u64,
}

fn inv_mod(x: u64, m: u64) -> u64 {
    modnum::mod_inverse(x as i128, m as i128).expect("prime order").into_value() as u64
}

/// Textbook ECDSA with nonces pulled from `next_nonce` until `r` and `s`
/// are both nonzero.
pub fn ecdsa_sign_with(
    digest: u64,
    private: u64,
    dom: &EcdsaDomain,
    mut next_nonce: impl FnMut() -> u64,
) -> Result<EcdsaSignature> {
    let q = dom.order as u128;
    let z = digest as u128 % q;
    let d = private as u128 % q;
    if d == 0 {
        return Err(Error::domain("ECDSA private key must be nonzero mod the group order"));
    }
    for _ in 0..1000 {
        let k = next_nonce() % dom.order;
        if k == 0 {
            continue;
        }
        let r = match point_pow(&dom.generator, k, &dom.curve)?.x() {
            Some(x) => x as u128 % q,
            None => continue,
        };
        if r == 0 {
            continue;
        }
        let s = inv_mod(k, dom.order) as u128 * ((z + r * d) % q) % q;
        if s == 0 {
            continue;
        }
        return Ok(EcdsaSignature { r: r as u64, s: s as u64 });
    }
    Err(Error::SigningFailed(1000))
}

pub fn ecdsa_sign(digest: u64, private: u64, dom: &EcdsaDomain, rng: &mut impl Rng) -> Result<EcdsaSignature> {
    ecdsa_sign_with(digest, private, dom, || rng.gen_range(1..dom.order))
}

pub fn ecdsa_verify(digest: u64, sig: &EcdsaSignature, public: &CurvePoint, dom: &EcdsaDomain) -> bool {
    let q = dom.order;
    if sig.r == 0 || sig.s == 0 || sig.r >= q || sig.s >= q || !on_curve(public, &dom.curve) {
        return false;
    }
    let w = inv_mod(sig.s, q) as u128;
    let u1 = (digest as u128 % q as u128) * w % q as u128;
    let u2 = sig.r as u128 * w % q as u128;
    let (Ok(a), Ok(b)) = (point_pow(&dom.generator, u1 as u64, &dom.curve), point_pow(public, u2 as u64, &dom.curve))
    else {
        return false;
    };
    match compose_unchecked(&a, &b, &dom.curve).x() {
        Some(x) => x % q == sig.r,
        None => false,
    }
}

/// Spacing of the try-and-increment message embedding: message `m` maps to
/// the first `x` in `m·K .. m·K + K` that lies on the curve.
pub const EMBED_STRIDE: u64 = 16;

pub fn embed_message(m: u64, c: &CurveParams) -> Result<CurvePoint> {
    let base = m.checked_mul(EMBED_STRIDE).filter(|b| b + EMBED_STRIDE <= c.p);
    let base = base.ok_or_else(|| Error::Encoding(format!("message {m} too large for F_{}", c.p)))?;
    for x in base..base + EMBED_STRIDE {
        let rhs = c.rhs(x);
        if let Some(y) = (0..c.p).find(|y| c.mul(*y, *y) == rhs) {
            return Ok(CurvePoint::affine(x, y));
        }
    }
    Err(Error::Encoding(format!("no curve point near x = {base}")))
}

/// Recovers the embedded message from an x-coordinate.
pub fn unembed_message(x: u64) -> u64 {
    x / EMBED_STRIDE
}

/// Reconstructed EC-ElGamal: only the decryption rule `m = π₁(M)` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElGamalCiphertext {
    pub ephemeral: CurvePoint,
    pub masked: CurvePoint,
}

pub fn elgamal_encrypt(
    msg_point: &CurvePoint,
    recipient: &CurvePoint,
    g: &CurvePoint,
    nonce: u64,
    c: &CurveParams,
) -> Result<ElGamalCiphertext> {
    check(msg_point, c)?;
    let ephemeral = point_pow(g, nonce, c)?;
    let mask = point_pow(recipient, nonce, c)?;
    Ok(ElGamalCiphertext { ephemeral, masked: compose_unchecked(msg_point, &mask, c) })
}

/// Returns the x-coordinate of the recovered message point.
pub fn elgamal_decrypt(ct: &ElGamalCiphertext, private: u64, c: &CurveParams) -> Result<u64> {
    let mask = point_pow(&ct.ephemeral, private, c)?;
    let m = compose(&ct.masked, &inverse(&mask, c), c)?;
    m.x().ok_or_else(|| Error::Decoding("recovered the point at infinity".into()))
}
