//! Text key, ciphertext and signature files.
//!
//! ```text
//! scheme: kyber-public
//! params: toy
//! q: 7
//! n: 4
//! k: 2
//! A[0][0]: 4 5 0 4
//! ...
//! t[1]: 4 3 3 4
//! ```
//!
//! Coefficients are listed in ascending degree and must lie in `[0, q)`.
//! Blank lines and `#` comments are ignored.

use std::fmt::{self, Write as _};

use qsafe_core::dilithium::{self, ChallengePoly, DilithiumParams, DilithiumPrivateKey, DilithiumPublicKey, DilithiumSignature};
use qsafe_core::kyber::{self, KyberCiphertext, KyberParams, KyberPrivateKey, KyberPublicKey};
use qsafe_core::polyring::{RingElem, RingMat, RingVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct KeyFileError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, KeyFileError> {
    Err(KeyFileError { line, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyMaterial {
    KyberPublic(KyberPublicKey),
    KyberPrivate(KyberPrivateKey),
    KyberCiphertext(KyberParams, KyberCiphertext),
    DilithiumPublic(DilithiumPublicKey),
    DilithiumPrivate(DilithiumPrivateKey),
    DilithiumSignature(DilithiumParams, DilithiumSignature),
}

impl KeyMaterial {
    pub fn scheme(&self) -> &'static str {
        match self {
            KeyMaterial::KyberPublic(_) => "kyber-public",
            KeyMaterial::KyberPrivate(_) => "kyber-private",
            KeyMaterial::KyberCiphertext(..) => "kyber-ciphertext",
            KeyMaterial::DilithiumPublic(_) => "dilithium-public",
            KeyMaterial::DilithiumPrivate(_) => "dilithium-private",
            KeyMaterial::DilithiumSignature(..) => "dilithium-signature",
        }
    }
}

/// Ring shape shared by both schemes. `m` is the row count of `A` and
/// equals `k` for Kyber.
#[derive(Debug, Clone, Copy)]
struct Shape {
    name: &'static str,
    q: u64,
    n: usize,
    k: usize,
    m: usize,
}

impl Shape {
    fn kyber(p: &KyberParams) -> Self {
        Shape { name: p.name, q: p.q, n: p.n, k: p.k, m: p.k }
    }

    fn dilithium(p: &DilithiumParams) -> Self {
        Shape { name: p.name, q: p.q, n: p.n, k: p.k, m: p.m }
    }

    fn headers(&self, dil: bool) -> Vec<(&'static str, String)> {
        let mut h = vec![("params", self.name.to_string()), ("q", self.q.to_string()), ("n", self.n.to_string())];
        if dil {
            h.push(("m", self.m.to_string()));
        }
        h.push(("k", self.k.to_string()));
        h
    }
}

// ---------------------------------------------------------------------------
// writing

struct Writer {
    out: String,
}

impl Writer {
    fn new(scheme: &str, shape: &Shape, dil: bool) -> Self {
        let mut out = format!("scheme: {scheme}\n");
        for (k, v) in shape.headers(dil) {
            let _ = writeln!(out, "{k}: {v}");
        }
        Writer { out }
    }

    fn elem(&mut self, name: &str, e: &RingElem) {
        let cs: Vec<String> = e.coeffs().iter().map(u64::to_string).collect();
        let _ = writeln!(self.out, "{name}: {}", cs.join(" "));
    }

    fn vec(&mut self, name: &str, v: &RingVec) {
        for (i, e) in v.entries().iter().enumerate() {
            self.elem(&format!("{name}[{i}]"), e);
        }
    }

    fn mat(&mut self, name: &str, a: &RingMat) {
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                self.elem(&format!("{name}[{i}][{j}]"), a.get(i, j));
            }
        }
    }
}

pub fn write_keyfile(km: &KeyMaterial) -> String {
    let scheme = km.scheme();
    let mut w;
    match km {
        KeyMaterial::KyberPublic(pk) => {
            w = Writer::new(scheme, &Shape::kyber(&pk.params), false);
            w.mat("A", &pk.a);
            w.vec("t", &pk.t);
        }
        KeyMaterial::KyberPrivate(sk) => {
            w = Writer::new(scheme, &Shape::kyber(&sk.params), false);
            w.vec("s", &sk.s);
        }
        KeyMaterial::KyberCiphertext(p, ct) => {
            w = Writer::new(scheme, &Shape::kyber(p), false);
            w.vec("u", &ct.u);
            w.elem("v", &ct.v);
        }
        KeyMaterial::DilithiumPublic(pk) => {
            w = Writer::new(scheme, &Shape::dilithium(&pk.params), true);
            w.mat("A", &pk.a);
            w.vec("t", &pk.t);
        }
        KeyMaterial::DilithiumPrivate(sk) => {
            w = Writer::new(scheme, &Shape::dilithium(&sk.params), true);
            w.vec("s", &sk.s);
        }
        KeyMaterial::DilithiumSignature(p, sig) => {
            w = Writer::new(scheme, &Shape::dilithium(p), true);
            w.vec("r2", &sig.r2);
            w.elem("c", sig.c.elem());
        }
    }
    w.out
}

impl fmt::Display for KeyMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_keyfile(self))
    }
}

// ---------------------------------------------------------------------------
// parsing

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
}

struct Reader<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    eof_line: usize,
    shape: Option<Shape>,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Result<Self, KeyFileError> {
        let mut lines = Vec::new();
        let mut eof_line = 1;
        for (i, raw) in text.lines().enumerate() {
            eof_line = i + 2;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once(':') else {
                return err(i + 1, format!("expected `name: value`, found `{body}`"));
            };
            lines.push(Line { no: i + 1, key: key.trim(), value: value.trim() });
        }
        Ok(Reader { lines, pos: 0, eof_line, shape: None })
    }

    fn next(&mut self, want: &str) -> Result<&Line<'a>, KeyFileError> {
        let Some(l) = self.lines.get(self.pos) else {
            return err(self.eof_line, format!("unexpected end of file, expected `{want}`"));
        };
        if l.key != want {
            return err(l.no, format!("expected `{want}`, found `{}`", l.key));
        }
        self.pos += 1;
        Ok(l)
    }

    fn header(&mut self, want: &str, expected: &str) -> Result<(), KeyFileError> {
        let l = self.next(want)?;
        if l.value != expected {
            return err(l.no, format!("{want} is `{}`, the parameter set requires `{expected}`", l.value));
        }
        Ok(())
    }

    fn headers(&mut self, shape: Shape, dil: bool) -> Result<(), KeyFileError> {
        for (k, v) in shape.headers(dil).into_iter().skip(1) {
            self.header(k, &v)?;
        }
        self.shape = Some(shape);
        Ok(())
    }

    fn elem(&mut self, name: &str) -> Result<RingElem, KeyFileError> {
        let s = self.shape.expect("headers first");
        let l = self.next(name)?;
        let no = l.no;
        let mut coeffs = Vec::with_capacity(s.n);
        for tok in l.value.split_whitespace() {
            let c: u64 = match tok.parse() {
                Ok(c) => c,
                Err(_) => return err(no, format!("`{tok}` is not a non-negative integer")),
            };
            if c >= s.q {
                return err(no, format!("coefficient {c} in {name} is not below q = {}", s.q));
            }
            coeffs.push(c);
        }
        if coeffs.len() != s.n {
            return err(no, format!("{name} has {} coefficients, expected {}", coeffs.len(), s.n));
        }
        Ok(RingElem::new(s.n, s.q, &coeffs).expect("validated"))
    }

    fn vec(&mut self, name: &str, len: usize) -> Result<RingVec, KeyFileError> {
        let entries = (0..len).map(|i| self.elem(&format!("{name}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        Ok(RingVec::new(entries).expect("uniform shape"))
    }

    fn mat(&mut self, name: &str, rows: usize, cols: usize) -> Result<RingMat, KeyFileError> {
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            out.push((0..cols).map(|j| self.elem(&format!("{name}[{i}][{j}]"))).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(RingMat::from_rows(out).expect("uniform shape"))
    }

    fn finish(&self) -> Result<(), KeyFileError> {
        match self.lines.get(self.pos) {
            Some(l) => err(l.no, format!("unexpected field `{}`", l.key)),
            None => Ok(()),
        }
    }
}

pub fn parse_keyfile(text: &str) -> Result<KeyMaterial, KeyFileError> {
    let mut r = Reader::new(text)?;
    let scheme = r.next("scheme")?.value.to_string();
    let (family, role) = scheme.split_once('-').unwrap_or((&scheme, ""));
    let params_line = r.next("params")?;
    let (pno, pname) = (params_line.no, params_line.value.to_string());
    let km = match family {
        "kyber" => {
            let Ok(p) = kyber::KyberParams::by_name(&pname) else {
                return err(pno, format!("unknown kyber parameter set `{pname}`"));
            };
            r.headers(Shape::kyber(&p), false)?;
            match role {
                "public" => KeyMaterial::KyberPublic(KyberPublicKey { params: p, a: r.mat("A", p.k, p.k)?, t: r.vec("t", p.k)? }),
                "private" => KeyMaterial::KyberPrivate(KyberPrivateKey { params: p, s: r.vec("s", p.k)? }),
                "ciphertext" => KeyMaterial::KyberCiphertext(p, KyberCiphertext { u: r.vec("u", p.k)?, v: r.elem("v")? }),
                _ => return err(1, format!("unknown scheme `{scheme}`")),
            }
        }
        "dilithium" => {
            let Ok(p) = dilithium::DilithiumParams::by_name(&pname) else {
                return err(pno, format!("unknown dilithium parameter set `{pname}`"));
            };
            r.headers(Shape::dilithium(&p), true)?;
            match role {
                "public" => {
                    KeyMaterial::DilithiumPublic(DilithiumPublicKey { params: p, a: r.mat("A", p.m, p.k)?, t: r.vec("t", p.m)? })
                }
                "private" => KeyMaterial::DilithiumPrivate(DilithiumPrivateKey { params: p, s: r.vec("s", p.k)? }),
                "signature" => {
                    let r2 = r.vec("r2", p.k)?;
                    let cno = r.lines.get(r.pos).map_or(r.eof_line, |l| l.no);
                    let c = ChallengePoly::new(r.elem("c")?, p.h).or_else(|e| err(cno, e.to_string()))?;
                    KeyMaterial::DilithiumSignature(p, DilithiumSignature { r2, c })
                }
                _ => return err(1, format!("unknown scheme `{scheme}`")),
            }
        }
        _ => return err(1, format!("unknown scheme `{scheme}`")),
    };
    r.finish()?;
    Ok(km)
}
