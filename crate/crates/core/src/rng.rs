//! Seeded, splittable, counter-based random stream.
//!
//! Output word `i` of a tape is a pure function of `(seed, i)`, so a tape can
//! be replayed from any position. Independent sub-streams come from
//! [`RandomTape::split`], which hashes a label into a fresh seed; drawing from
//! one sub-stream never shifts another.

use rand::RngCore;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomTape {
    seed: u64,
    counter: u64,
}

impl RandomTape {
    pub fn new(seed: u64) -> Self {
        RandomTape { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Derives an independent tape for `label`. Depends only on this tape's
    /// seed, not on how much of it has been consumed.
    pub fn split(&self, label: &str) -> RandomTape {
        let seed = mix64(self.seed ^ mix64(fnv1a(label.as_bytes()).wrapping_add(GOLDEN_GAMMA)));
        RandomTape::new(seed)
    }
}

impl RngCore for RandomTape {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let w = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&w[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}
