//! The reversible byte to printable-character table used by byte-level BPE
//! vocabularies (`Ġ` is the space byte, `Ċ` the newline byte, ...).

use std::sync::LazyLock;

struct ByteTable {
    encode: [char; 256],
    decode: std::collections::HashMap<char, u8>,
}

static TABLE: LazyLock<ByteTable> = LazyLock::new(|| {
    let printable = |b: u32| (0x21..=0x7e).contains(&b) || (0xa1..=0xac).contains(&b) || (0xae..=0xff).contains(&b);
    let mut encode = ['\0'; 256];
    let mut next = 256u32;
    for b in 0..256u32 {
        let c = if printable(b) {
            b
        } else {
            next += 1;
            next - 1
        };
        encode[b as usize] = char::from_u32(c).expect("code point in range");
    }
    let decode = encode.iter().enumerate().map(|(b, &c)| (c, b as u8)).collect();
    ByteTable { encode, decode }
});

pub fn byte_to_char(b: u8) -> char {
    TABLE.encode[b as usize]
}

pub fn char_to_byte(c: char) -> Option<u8> {
    TABLE.decode.get(&c).copied()
}

/// All 256 byte symbols, in byte order.
pub fn alphabet() -> impl Iterator<Item = char> {
    TABLE.encode.iter().copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_symbols() {
        assert_eq!(byte_to_char(b' '), 'Ġ');
        assert_eq!(byte_to_char(b'\n'), 'Ċ');
        assert_eq!(byte_to_char(b'\t'), 'ĉ');
        assert_eq!(byte_to_char(b'a'), 'a');
        assert_eq!(byte_to_char(0xad), 'Ń');
    }

    #[test]
    fn bijective() {
        let set: std::collections::HashSet<char> = alphabet().collect();
        assert_eq!(set.len(), 256);
        for b in 0..=255u8 {
            assert_eq!(char_to_byte(byte_to_char(b)), Some(b));
        }
        assert_eq!(char_to_byte('€'), None);
    }
}
