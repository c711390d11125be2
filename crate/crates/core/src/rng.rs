//! Deterministic random streams.
//!
//! A stream is identified by `(master_seed, stream_index)`. The generator is
//! ChaCha8 keyed by the master seed with the stream index selecting the
//! ChaCha stream, so independent streams need no coordination and a run can
//! be reproduced in isolation from its two integers alone.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut hash: u64, bytes: &[u8]) -> u64 {
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Stream index for one experiment unit.
///
/// FNV-1a (64-bit) over the UTF-8 experiment kind, then each axis index as a
/// little-endian `u64`, then the replicate index as a little-endian `u64`.
pub fn derive_stream_index(kind: &str, axis: &[usize], replicate: usize) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, kind.as_bytes());
    for &i in axis {
        h = fnv1a(h, &(i as u64).to_le_bytes());
    }
    fnv1a(h, &(replicate as u64).to_le_bytes())
}
