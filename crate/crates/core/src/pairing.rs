//! Type-3 bilinear group arithmetic over BN254.
//!
//! Wraps the arkworks BN254 backend behind newtypes so the rest of the crate
//! is written against an abstract (G1, G2, GT, pairing) interface. Elements
//! serialize to fixed-length compressed canonical encodings; deserialization
//! rejects wrong lengths, non-canonical bytes, off-curve points, and points
//! outside the prime-order subgroup.

use ark_bn254::{Bn254, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{AffineRepr, CurveGroup, PrimeGroup};
use ark_ff::{Field, PrimeField, UniformRand, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize, Compress, Validate};
use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha3::{Digest, Keccak256};

use crate::counters;
use crate::hash_to_curve;

/// Serialized length of a compressed G1 point.
pub const G1_BYTES: usize = 32;
/// Serialized length of a compressed G2 point.
pub const G2_BYTES: usize = 64;
/// Serialized length of a GT element.
pub const GT_BYTES: usize = 384;
/// Serialized length of a scalar.
pub const SCALAR_BYTES: usize = 32;

/// Suite identifier pinned into [`SchemeParams`]; also the domain separation
/// tag fed to the hash-to-curve expansion.
pub const HASH_TO_CURVE_SUITE: &str = "NICKPAY-V01-BN254G1_XMD:SHA-256_SVDW_RO_";

/// Rejected byte-string: wrong length, non-canonical form, off-curve point,
/// or wrong subgroup.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed encoding: {0}")]
pub struct MalformedEncoding(pub &'static str);

/// Scalar in the shared prime-order field of G1/G2/GT.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Scalar(pub(crate) Fr);

/// Element of the pairing source group G1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G1Elem(pub(crate) G1Affine);

/// Element of the pairing source group G2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G2Elem(pub(crate) G2Affine);

/// Element of the pairing target group GT.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GtElem(pub(crate) PairingOutput<Bn254>);

/// Fixed public parameters: the curve, its two generators, and the pinned
/// hash-to-curve suite. Group order is prime and shared by G1, G2, GT, and
/// the scalar field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Nominal security level in bits.
    pub security_bits: u32,
    /// Identifier of the pairing instantiation.
    pub curve_id: String,
    /// Identifier of the hash-to-G1 suite; golden files are only valid for
    /// this exact suite.
    pub hash_to_curve_suite: String,
    g: G1Elem,
    g_hat: G2Elem,
}

impl SchemeParams {
    /// Parameters for the BN254 instantiation.
    pub fn bn254() -> Self {
        SchemeParams {
            security_bits: 128,
            curve_id: "bn254".to_string(),
            hash_to_curve_suite: HASH_TO_CURVE_SUITE.to_string(),
            g: G1Elem::generator(),
            g_hat: G2Elem::generator(),
        }
    }

    /// Generator of G1.
    pub fn g(&self) -> &G1Elem {
        &self.g
    }

    /// Generator of G2.
    pub fn g_hat(&self) -> &G2Elem {
        &self.g_hat
    }
}

impl Default for SchemeParams {
    fn default() -> Self {
        SchemeParams::bn254()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Fr::zero())
    }

    pub fn one() -> Self {
        Scalar(Fr::from(1u64))
    }

    pub fn from_u64(v: u64) -> Self {
        Scalar(Fr::from(v))
    }

    pub fn from_u128(v: u128) -> Self {
        Scalar(Fr::from(v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Interpret a byte string as a big-endian integer and reduce mod p.
    pub fn from_be_bytes_mod_order(bytes: &[u8]) -> Self {
        Scalar(Fr::from_be_bytes_mod_order(bytes))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        Scalar(self.0 + other.0)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        Scalar(self.0 - other.0)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar(self.0 * other.0)
    }

    pub fn neg(&self) -> Scalar {
        Scalar(-self.0)
    }

    pub fn inverse(&self) -> Option<Scalar> {
        self.0.inverse().map(Scalar)
    }

    pub fn to_bytes(&self) -> [u8; SCALAR_BYTES] {
        let mut out = [0u8; SCALAR_BYTES];
        self.0
            .serialize_compressed(&mut out[..])
            .expect("scalar serialization is infallible");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != SCALAR_BYTES {
            return Err(MalformedEncoding("scalar: wrong length"));
        }
        Fr::deserialize_with_mode(bytes, Compress::Yes, Validate::Yes)
            .map(Scalar)
            .map_err(|_| MalformedEncoding("scalar: non-canonical"))
    }
}

impl G1Elem {
    pub fn generator() -> Self {
        G1Elem(G1Affine::generator())
    }

    pub fn identity() -> Self {
        G1Elem(G1Affine::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul(&self, s: &Scalar) -> G1Elem {
        G1Elem((self.0 * s.0).into_affine())
    }

    pub fn add(&self, other: &G1Elem) -> G1Elem {
        G1Elem((G1Projective::from(self.0) + other.0).into_affine())
    }

    pub fn to_bytes(&self) -> [u8; G1_BYTES] {
        let mut out = [0u8; G1_BYTES];
        self.0
            .serialize_compressed(&mut out[..])
            .expect("G1 serialization is infallible");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != G1_BYTES {
            return Err(MalformedEncoding("G1: wrong length"));
        }
        G1Affine::deserialize_with_mode(bytes, Compress::Yes, Validate::Yes)
            .map(G1Elem)
            .map_err(|_| MalformedEncoding("G1: invalid point"))
    }
}

impl G2Elem {
    pub fn generator() -> Self {
        G2Elem(G2Affine::generator())
    }

    pub fn identity() -> Self {
        G2Elem(G2Affine::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul(&self, s: &Scalar) -> G2Elem {
        G2Elem((self.0 * s.0).into_affine())
    }

    pub fn add(&self, other: &G2Elem) -> G2Elem {
        G2Elem((G2Projective::from(self.0) + other.0).into_affine())
    }

    pub fn to_bytes(&self) -> [u8; G2_BYTES] {
        let mut out = [0u8; G2_BYTES];
        self.0
            .serialize_compressed(&mut out[..])
            .expect("G2 serialization is infallible");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != G2_BYTES {
            return Err(MalformedEncoding("G2: wrong length"));
        }
        G2Affine::deserialize_with_mode(bytes, Compress::Yes, Validate::Yes)
            .map(G2Elem)
            .map_err(|_| MalformedEncoding("G2: invalid point or subgroup"))
    }
}

impl GtElem {
    /// Multiplicative identity of GT.
    pub fn one() -> Self {
        GtElem(PairingOutput::<Bn254>::zero())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    /// Group operation (multiplication in GT).
    pub fn mul(&self, other: &GtElem) -> GtElem {
        GtElem(self.0 + other.0)
    }

    /// Exponentiation by a scalar.
    pub fn pow(&self, s: &Scalar) -> GtElem {
        GtElem(self.0.mul_bigint(s.0.into_bigint()))
    }

    /// Group inverse.
    pub fn inverse(&self) -> GtElem {
        GtElem(-self.0)
    }

    pub fn to_bytes(&self) -> [u8; GT_BYTES] {
        let mut out = [0u8; GT_BYTES];
        self.0
            .serialize_compressed(&mut out[..])
            .expect("GT serialization is infallible");
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != GT_BYTES {
            return Err(MalformedEncoding("GT: wrong length"));
        }
        PairingOutput::<Bn254>::deserialize_with_mode(bytes, Compress::Yes, Validate::Yes)
            .map(GtElem)
            .map_err(|_| MalformedEncoding("GT: invalid element"))
    }
}

/// Bilinear pairing e: G1 × G2 → GT. Total on valid elements; every call is
/// counted (see [`crate::counters`]).
pub fn pair(a: &G1Elem, b: &G2Elem) -> GtElem {
    counters::bump_pairings();
    GtElem(Bn254::pairing(a.0, b.0))
}

/// Uniform nonzero scalar. Zero is excluded: a zero exponent degenerates
/// nicknames to the identity triple.
pub fn random_scalar<R: RngCore + CryptoRng>(rng: &mut R) -> Scalar {
    loop {
        let s = Fr::rand(rng);
        if !s.is_zero() {
            return Scalar(s);
        }
    }
}

/// Deterministic hash of arbitrary bytes to a G1 point, following the
/// XMD:SHA-256 expansion with the Shallue-van de Woestijne map (suite
/// [`HASH_TO_CURVE_SUITE`]). BN254 G1 has cofactor 1, so every mapped point
/// lies in the prime-order subgroup.
pub fn hash_to_g1(msg: &[u8]) -> G1Elem {
    G1Elem(hash_to_curve::hash_to_g1_inner(
        msg,
        HASH_TO_CURVE_SUITE.as_bytes(),
    ))
}

/// keccak-256 digest (the pre-standard Ethereum variant, not SHA3-256).
pub fn keccak_digest(msg: &[u8]) -> [u8; 32] {
    let mut hasher = Keccak256::new();
    hasher.update(msg);
    hasher.finalize().into()
}

macro_rules! impl_hex_serde {
    ($ty:ty, $what:literal) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&hex::encode(self.to_bytes()))
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                let bytes = hex::decode(&s)
                    .map_err(|_| serde::de::Error::custom(concat!($what, ": invalid hex")))?;
                <$ty>::from_bytes(&bytes).map_err(serde::de::Error::custom)
            }
        }
    };
}

impl_hex_serde!(Scalar, "scalar");
impl_hex_serde!(G1Elem, "G1");
impl_hex_serde!(G2Elem, "G2");
impl_hex_serde!(GtElem, "GT");
