//! Deterministic stream derivation.
//!
//! Every random stream used by the library is a ChaCha8 generator
//! (`rand_chacha::ChaCha8Rng`, a counter-based generator with a 256-bit key)
//! keyed by
//!
//! ```text
//! key = SHA-256( le_u64(parent_seed) || le_u64(len(label)) || label || le_u64(index) )
//! ```
//!
//! `parent_seed` is a master seed or a seed produced by [`derive_seed`], which
//! is the first eight bytes of the same digest read as little-endian `u64`.
//! The derivation is part of the output format: reimplementations that use
//! the same generator family reproduce identical streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

/// Raw 32-byte key for the stream `(parent_seed, label, index)`.
pub fn derive_key(parent_seed: u64, label: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(parent_seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

/// A child seed, usable as the parent of further derivations.
pub fn derive_seed(parent_seed: u64, label: &str, index: u64) -> u64 {
    let key = derive_key(parent_seed, label, index);
    u64::from_le_bytes(key[..8].try_into().expect("digest has 32 bytes"))
}

pub fn derive_stream(parent_seed: u64, label: &str, index: u64) -> StreamRng {
    ChaCha8Rng::from_seed(derive_key(parent_seed, label, index))
}
