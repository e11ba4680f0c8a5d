//! Conventional (non-anonymous) signatures: Schnorr over G1 in
//! challenge-response form. Used by users to bind join requests to their
//! long-term identity and by the minting authority to authorize mints.

use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};

use crate::pairing::{
    random_scalar, G1Elem, MalformedEncoding, Scalar, SchemeParams, G1_BYTES, SCALAR_BYTES,
};
use crate::proofs::Transcript;

const DS_TAG: &[u8] = b"nickpay.ds.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsSecretKey(pub(crate) Scalar);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsPublicKey(pub G1Elem);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsKeyPair {
    pub sk: DsSecretKey,
    pub pk: DsPublicKey,
}

/// Schnorr signature (c, s) with c = H(tag, pk, g^k, m) and s = k + c·sk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsSignature {
    pub challenge: Scalar,
    pub response: Scalar,
}

impl DsPublicKey {
    pub const BYTES: usize = G1_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        self.0.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        G1Elem::from_bytes(bytes).map(DsPublicKey)
    }
}

impl DsSignature {
    pub const BYTES: usize = 2 * SCALAR_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..SCALAR_BYTES].copy_from_slice(&self.challenge.to_bytes());
        out[SCALAR_BYTES..].copy_from_slice(&self.response.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("DsSignature: wrong length"));
        }
        Ok(DsSignature {
            challenge: Scalar::from_bytes(&bytes[..SCALAR_BYTES])?,
            response: Scalar::from_bytes(&bytes[SCALAR_BYTES..])?,
        })
    }
}

fn challenge(pk: &DsPublicKey, commitment: &G1Elem, msg: &[u8]) -> Scalar {
    Transcript::new(DS_TAG)
        .append(&pk.to_bytes())
        .append(&commitment.to_bytes())
        .append(msg)
        .challenge()
}

pub fn ds_keygen<R: RngCore + CryptoRng>(params: &SchemeParams, rng: &mut R) -> DsKeyPair {
    let sk = random_scalar(rng);
    DsKeyPair {
        sk: DsSecretKey(sk),
        pk: DsPublicKey(params.g().mul(&sk)),
    }
}

pub fn ds_sign<R: RngCore + CryptoRng>(
    params: &SchemeParams,
    sk: &DsSecretKey,
    msg: &[u8],
    rng: &mut R,
) -> DsSignature {
    let pk = DsPublicKey(params.g().mul(&sk.0));
    let k = random_scalar(rng);
    let commitment = params.g().mul(&k);
    let c = challenge(&pk, &commitment, msg);
    DsSignature {
        challenge: c,
        response: k.add(&c.mul(&sk.0)),
    }
}

pub fn ds_verify(params: &SchemeParams, pk: &DsPublicKey, msg: &[u8], sig: &DsSignature) -> bool {
    // g^s · pk^(-c) reconstructs the commitment iff s = k + c·sk
    let commitment = params
        .g()
        .mul(&sig.response)
        .add(&pk.0.mul(&sig.challenge.neg()));
    challenge(pk, &commitment, msg) == sig.challenge
}
