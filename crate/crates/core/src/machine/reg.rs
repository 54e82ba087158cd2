//! Unbounded register with a machine-word fast path.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Reg {
    Small(u64),
    Big(BigUint),
}

impl Reg {
    pub fn from_big(v: &BigUint) -> Self {
        match v.to_u64() {
            Some(x) => Reg::Small(x),
            None => Reg::Big(v.clone()),
        }
    }

    pub fn to_big(&self) -> BigUint {
        match self {
            Reg::Small(x) => BigUint::from(*x),
            Reg::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Reg::Small(0))
    }

    pub fn inc(&mut self) {
        match self {
            Reg::Small(x) => match x.checked_add(1) {
                Some(y) => *x = y,
                None => *self = Reg::Big(BigUint::from(*x) + 1u32),
            },
            Reg::Big(b) => *b += 1u32,
        }
    }

    pub fn dec(&mut self) {
        match self {
            Reg::Small(x) => *x = x.saturating_sub(1),
            Reg::Big(b) => {
                *b -= 1u32;
                self.normalize();
            }
        }
    }

    pub fn shl(&mut self) {
        self.load_bit(false);
    }

    pub fn load_bit(&mut self, bit: bool) {
        match self {
            Reg::Small(x) if *x >> 63 == 0 => *x = (*x << 1) | u64::from(bit),
            Reg::Small(x) => *self = Reg::Big((BigUint::from(*x) << 1u32) + u32::from(bit)),
            Reg::Big(b) => {
                *b <<= 1u32;
                if bit {
                    *b += 1u32;
                }
            }
        }
    }

    fn normalize(&mut self) {
        if let Reg::Big(b) = self {
            if let Some(x) = b.to_u64() {
                *self = Reg::Small(x);
            } else if b.is_zero() {
                *self = Reg::Small(0);
            }
        }
    }
}
