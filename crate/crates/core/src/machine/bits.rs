//! Bit sources and Elias gamma codes.

use num_bigint::BigUint;
use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use super::DecodeError;

/// Advance-only reader over a finite bit string or a seeded random stream.
///
/// Reading past the end of a finite source returns `None`; that is the
/// exhaustion signal, not an error.
#[derive(Debug, Clone)]
pub struct BitSource {
    kind: Kind,
    cursor: u64,
}

// One source lives per machine run; the inline RNG is cheaper than a box.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
enum Kind {
    Finite(Vec<bool>),
    Random { rng: ChaCha8Rng, word: u64, left: u32, limit: Option<u64>, history: Vec<bool> },
}

impl BitSource {
    pub fn finite(bits: Vec<bool>) -> Self {
        BitSource { kind: Kind::Finite(bits), cursor: 0 }
    }

    /// Bits drawn lazily from `rng`, 64 at a time, most significant bit
    /// first; `limit` makes the source finite.
    pub fn random(rng: ChaCha8Rng, limit: Option<u64>) -> Self {
        BitSource { kind: Kind::Random { rng, word: 0, left: 0, limit, history: Vec::new() }, cursor: 0 }
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// Total length, if finite.
    pub fn len(&self) -> Option<u64> {
        match &self.kind {
            Kind::Finite(b) => Some(b.len() as u64),
            Kind::Random { limit, .. } => *limit,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The bits consumed so far.
    pub fn consumed(&self) -> &[bool] {
        match &self.kind {
            Kind::Finite(b) => &b[..self.cursor as usize],
            Kind::Random { history, .. } => history,
        }
    }

    pub fn next_bit(&mut self) -> Option<bool> {
        let bit = match &mut self.kind {
            Kind::Finite(b) => *b.get(self.cursor as usize)?,
            Kind::Random { rng, word, left, limit, history } => {
                if limit.is_some_and(|l| self.cursor >= l) {
                    return None;
                }
                if *left == 0 {
                    *word = rng.next_u64();
                    *left = 64;
                }
                *left -= 1;
                let bit = (*word >> *left) & 1 == 1;
                history.push(bit);
                bit
            }
        };
        self.cursor += 1;
        Some(bit)
    }
}

/// Elias gamma code of `m >= 1`.
pub fn gamma_encode(m: &BigUint) -> Vec<bool> {
    assert!(m.bits() > 0, "gamma codes start at 1");
    let len = m.bits();
    let mut out = vec![false; (len - 1) as usize];
    for i in (0..len).rev() {
        out.push(m.bit(i));
    }
    out
}

/// Reads a gamma code whose value fits in `max_zeros + 1` bits.
pub fn gamma_decode(src: &mut BitSource, max_zeros: u32) -> Result<u64, DecodeError> {
    let max_zeros = max_zeros.min(63);
    let mut zeros = 0u32;
    loop {
        match src.next_bit() {
            None => return Err(DecodeError::Incomplete { read: 0 }),
            Some(true) => break,
            Some(false) => {
                zeros += 1;
                if zeros > max_zeros {
                    return Err(DecodeError::CodeTooLong);
                }
            }
        }
    }
    let mut v = 1u64;
    for _ in 0..zeros {
        let b = src.next_bit().ok_or(DecodeError::Incomplete { read: 0 })?;
        v = (v << 1) | u64::from(b);
    }
    Ok(v)
}

/// Parses a string of `0`/`1` characters; whitespace and `_` are skipped.
pub fn parse_bits(text: &str) -> Option<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn gamma_roundtrip() {
        assert_eq!(format_bits(&gamma_encode(&BigUint::from(1u32))), "1");
        assert_eq!(format_bits(&gamma_encode(&BigUint::from(5u32))), "00101");
        for m in 1u64..2000 {
            let mut s = BitSource::finite(gamma_encode(&BigUint::from(m)));
            assert_eq!(gamma_decode(&mut s, 63), Ok(m));
            assert_eq!(s.next_bit(), None);
        }
    }

    #[test]
    fn random_source_is_reproducible_and_limited() {
        let mut a = BitSource::random(ChaCha8Rng::seed_from_u64(7), Some(100));
        let mut b = BitSource::random(ChaCha8Rng::seed_from_u64(7), None);
        let xs: Vec<bool> = std::iter::from_fn(|| a.next_bit()).collect();
        assert_eq!(xs.len(), 100);
        let ys: Vec<bool> = (0..100).map(|_| b.next_bit().unwrap()).collect();
        assert_eq!(xs, ys);
        assert_eq!(a.consumed(), &xs[..]);
    }
}
