//! Stable 64-bit FNV-1a hashing for vocabulary fingerprints and config hashes.

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

#[derive(Debug, Clone, Copy)]
pub struct Fnv64(u64);

impl Fnv64 {
    pub fn new() -> Self {
        Fnv64(FNV_OFFSET)
    }

    pub fn update(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

impl Default for Fnv64 {
    fn default() -> Self {
        Self::new()
    }
}

pub fn fnv64_str_seq<'a>(items: impl IntoIterator<Item = &'a str>) -> u64 {
    let mut h = Fnv64::new();
    for s in items {
        h.update(s.as_bytes());
        // separator byte so ["ab","c"] != ["a","bc"]
        h.update(&[0xff]);
    }
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separator_disambiguates() {
        assert_ne!(fnv64_str_seq(["ab", "c"]), fnv64_str_seq(["a", "bc"]));
    }

    #[test]
    fn stable_value() {
        // FNV-1a of empty input is the offset basis.
        assert_eq!(Fnv64::new().finish(), FNV_OFFSET);
    }
}
