//! Signed residue arithmetic on the window `M = {-m+1, ..., m}`.
//!
//! Cosets of a cyclic quotient of order `2m` are indexed by exponents drawn
//! from this window rather than from `0..2m`. The carry function [`sigma`]
//! records whether an ordinary integer sum fell off either end of the window,
//! which is exactly the information the constructions need.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{value} is outside the window {{{lo}..={hi}}}")]
pub struct OutOfWindow {
    pub value: i64,
    pub lo: i64,
    pub hi: i64,
}

/// The window `M = {-m+1, ..., m}` of size `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    m: i64,
}

impl Window {
    /// Returns `None` when `m < 1`.
    pub fn new(m: i64) -> Option<Self> {
        (m >= 1).then_some(Window { m })
    }

    pub fn half_width(self) -> i64 {
        self.m
    }

    /// `2m`, the modulus.
    pub fn modulus(self) -> i64 {
        2 * self.m
    }

    pub fn lo(self) -> i64 {
        1 - self.m
    }

    pub fn hi(self) -> i64 {
        self.m
    }

    pub fn contains(self, i: i64) -> bool {
        (self.lo()..=self.hi()).contains(&i)
    }

    /// Elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = i64> + Clone {
        self.lo()..=self.hi()
    }

    /// The representative in `M` of the residue class of `i` modulo `2m`.
    pub fn reduce(self, i: i64) -> i64 {
        let r = i.rem_euclid(self.modulus());
        if r > self.m {
            r - self.modulus()
        } else {
            r
        }
    }

    fn check(self, i: i64) -> Result<i64, OutOfWindow> {
        if self.contains(i) {
            Ok(i)
        } else {
            Err(OutOfWindow {
                value: i,
                lo: self.lo(),
                hi: self.hi(),
            })
        }
    }
}

/// Carry out of the window: one of `-1`, `0`, `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carry(i8);

impl Carry {
    pub const DOWN: Carry = Carry(-1);
    pub const NONE: Carry = Carry(0);
    pub const UP: Carry = Carry(1);

    pub fn value(self) -> i8 {
        self.0
    }
}

impl From<Carry> for i64 {
    fn from(c: Carry) -> i64 {
        c.0 as i64
    }
}

impl std::ops::Neg for Carry {
    type Output = Carry;
    fn neg(self) -> Carry {
        Carry(-self.0)
    }
}

/// `1` if `i > m`, `0` if `i` lies in the window, `-1` if `i < 1 - m`.
pub fn sigma(i: i64, w: Window) -> Carry {
    if i > w.hi() {
        Carry::UP
    } else if i < w.lo() {
        Carry::DOWN
    } else {
        Carry::NONE
    }
}

/// Integer value of [`sigma`], convenient inside exponent arithmetic.
#[inline]
pub fn sigma_i(i: i64, w: Window) -> i64 {
    sigma(i, w).into()
}

/// `i ⊕ j = i + j - 2m·σ(i + j)`.
pub fn oplus(i: i64, j: i64, w: Window) -> Result<i64, OutOfWindow> {
    let (i, j) = (w.check(i)?, w.check(j)?);
    Ok(i + j - w.modulus() * sigma_i(i + j, w))
}

/// `i ⊖ j = i - j - 2m·σ(i - j)`.
pub fn ominus(i: i64, j: i64, w: Window) -> Result<i64, OutOfWindow> {
    let (i, j) = (w.check(i)?, w.check(j)?);
    Ok(i - j - w.modulus() * sigma_i(i - j, w))
}
