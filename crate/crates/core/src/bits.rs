//! Basis-state labels.
//!
//! A computational basis state on `w` qubits is stored as an integer whose
//! bit `j` is the value of qubit `j`. Text form lists qubit 0 first, so the
//! string `"01"` means qubit 0 is `0` and qubit 1 is `1`.

use crate::error::CircuitError;

/// Basis-state label; bit `j` is qubit `j`.
pub type Bits = u128;

/// Largest number of qubits a [`Bits`] label can address.
pub const MAX_LABEL_QUBITS: usize = 128;

pub fn parse_bits(text: &str) -> Result<(Bits, usize), CircuitError> {
    let len = text.chars().count();
    if len > MAX_LABEL_QUBITS {
        return Err(CircuitError::WidthCap {
            width: len,
            cap: MAX_LABEL_QUBITS,
        });
    }
    let mut bits: Bits = 0;
    for (j, ch) in text.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => bits |= 1 << j,
            other => return Err(CircuitError::InvalidBit(other)),
        }
    }
    Ok((bits, len))
}

/// Parses a bit string that must have exactly `expected` characters.
pub fn parse_bits_exact(text: &str, expected: usize) -> Result<Bits, CircuitError> {
    let (bits, len) = parse_bits(text)?;
    if len != expected {
        return Err(CircuitError::InputLength { expected, got: len });
    }
    Ok(bits)
}

pub fn format_bits(bits: Bits, len: usize) -> String {
    (0..len)
        .map(|j| if bit(bits, j) { '1' } else { '0' })
        .collect()
}

#[inline]
pub fn bit(bits: Bits, j: usize) -> bool {
    (bits >> j) & 1 == 1
}

#[inline]
pub fn low_mask(len: usize) -> Bits {
    if len >= MAX_LABEL_QUBITS {
        Bits::MAX
    } else {
        (1 << len) - 1
    }
}

/// Collects the bits of `index` at `qubits` into a compact local index
/// (bit `k` of the result is qubit `qubits[k]`).
#[inline]
pub fn gather(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (((index >> q) & 1) << k))
}

/// Overwrites the bits of `index` at `qubits` with the bits of `local`.
#[inline]
pub fn scatter(index: usize, qubits: &[usize], local: usize) -> usize {
    qubits.iter().enumerate().fold(index, |acc, (k, &q)| {
        (acc & !(1 << q)) | (((local >> k) & 1) << q)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_zero_is_first_character() {
        let (b, len) = parse_bits("011").unwrap();
        assert_eq!(len, 3);
        assert_eq!(b, 0b110);
        assert_eq!(format_bits(b, 3), "011");
    }

    #[test]
    fn rejects_non_binary() {
        assert_eq!(parse_bits("01a"), Err(CircuitError::InvalidBit('a')));
        assert!(matches!(
            parse_bits_exact("01", 3),
            Err(CircuitError::InputLength {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn gather_scatter_inverse() {
        let qubits = [4, 1, 6];
        for index in 0..256usize {
            let local = gather(index, &qubits);
            assert_eq!(scatter(index, &qubits, local), index);
            for other in 0..8 {
                assert_eq!(gather(scatter(index, &qubits, other), &qubits), other);
            }
        }
    }
}
