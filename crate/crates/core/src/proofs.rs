//! Fiat-Shamir transcript: a domain tag followed by fixed-length encodings of
//! the statement, the commitments, and (where present) the message, hashed
//! with keccak-256 and reduced into the scalar field. Every appended item has
//! a fixed serialized length, so plain concatenation is injective per tag.

use crate::pairing::{keccak_digest, Scalar};

pub(crate) struct Transcript {
    data: Vec<u8>,
}

impl Transcript {
    pub fn new(tag: &[u8]) -> Self {
        Transcript { data: tag.to_vec() }
    }

    pub fn append(&mut self, bytes: &[u8]) -> &mut Self {
        self.data.extend_from_slice(bytes);
        self
    }

    pub fn challenge(&self) -> Scalar {
        Scalar::from_be_bytes_mod_order(&keccak_digest(&self.data))
    }
}
