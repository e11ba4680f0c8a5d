//! Hash-to-curve for BN254 G1, following RFC 9380 (hash_to_curve, random
//! oracle variant): expand_message_xmd with SHA-256 feeding two field
//! elements through the Shallue-van de Woestijne map. BN254 G1 has cofactor
//! one, so cofactor clearing is the identity.
//!
//! The curve is y^2 = x^3 + 3 over Fq with Z = 1, giving map constants
//! c1 = g(Z) = 4, c2 = -1/2, c3 = sqrt(-12) (sign-normalized), c4 = -16/3.

use ark_bn254::{Fq, G1Affine};
use ark_ff::{BigInteger, Field, LegendreSymbol, PrimeField, Zero};
use sha2::{Digest, Sha256};
use std::sync::OnceLock;

/// Output length per field element: ceil((254 + 128) / 8).
const L: usize = 48;
const SHA256_BLOCK: usize = 64;
const SHA256_OUT: usize = 32;

/// RFC 9380 expand_message_xmd instantiated with SHA-256.
pub(crate) fn expand_message_xmd(msg: &[u8], dst: &[u8], len_in_bytes: usize) -> Vec<u8> {
    let ell = len_in_bytes.div_ceil(SHA256_OUT);
    assert!(ell <= 255 && len_in_bytes <= 65535 && dst.len() <= 255);

    let mut dst_prime = dst.to_vec();
    dst_prime.push(dst.len() as u8);

    let mut h = Sha256::new();
    h.update([0u8; SHA256_BLOCK]);
    h.update(msg);
    h.update((len_in_bytes as u16).to_be_bytes());
    h.update([0u8]);
    h.update(&dst_prime);
    let b0: [u8; SHA256_OUT] = h.finalize().into();

    let mut h = Sha256::new();
    h.update(b0);
    h.update([1u8]);
    h.update(&dst_prime);
    let mut bi: [u8; SHA256_OUT] = h.finalize().into();

    let mut uniform = Vec::with_capacity(ell * SHA256_OUT);
    uniform.extend_from_slice(&bi);
    for i in 2..=ell {
        let mut xored = [0u8; SHA256_OUT];
        for (j, x) in xored.iter_mut().enumerate() {
            *x = b0[j] ^ bi[j];
        }
        let mut h = Sha256::new();
        h.update(xored);
        h.update([i as u8]);
        h.update(&dst_prime);
        bi = h.finalize().into();
        uniform.extend_from_slice(&bi);
    }
    uniform.truncate(len_in_bytes);
    uniform
}

/// Two uniform Fq elements derived from msg under dst.
fn hash_to_field(msg: &[u8], dst: &[u8]) -> (Fq, Fq) {
    let bytes = expand_message_xmd(msg, dst, 2 * L);
    let u0 = Fq::from_be_bytes_mod_order(&bytes[..L]);
    let u1 = Fq::from_be_bytes_mod_order(&bytes[L..]);
    (u0, u1)
}

struct SvdwConstants {
    c1: Fq,
    c2: Fq,
    c3: Fq,
    c4: Fq,
    z: Fq,
}

fn constants() -> &'static SvdwConstants {
    static CONSTS: OnceLock<SvdwConstants> = OnceLock::new();
    CONSTS.get_or_init(|| {
        let z = Fq::from(1u64);
        let g_z = z * z * z + Fq::from(3u64);
        let c1 = g_z;
        let c2 = -(z / Fq::from(2u64));
        let mut c3 = (-g_z * Fq::from(3u64) * z * z)
            .sqrt()
            .expect("-12 is a square in Fq");
        if sgn0(&c3) == 1 {
            c3 = -c3;
        }
        let c4 = -Fq::from(4u64) * g_z / (Fq::from(3u64) * z * z);
        SvdwConstants { c1, c2, c3, c4, z }
    })
}

/// Parity of the canonical integer representative.
fn sgn0(x: &Fq) -> u8 {
    u8::from(x.into_bigint().is_odd())
}

fn is_square(x: &Fq) -> bool {
    x.legendre() != LegendreSymbol::QuadraticNonResidue
}

fn inv0(x: &Fq) -> Fq {
    x.inverse().unwrap_or_else(Fq::zero)
}

/// Straight-line SvdW map; never produces the point at infinity.
fn map_to_curve(u: &Fq) -> G1Affine {
    let k = constants();

    let mut tv1 = u.square();
    tv1 *= k.c1;
    let tv2 = Fq::from(1u64) + tv1;
    let tv1 = Fq::from(1u64) - tv1;
    let mut tv3 = tv1 * tv2;
    tv3 = inv0(&tv3);
    let mut tv4 = *u * tv1;
    tv4 *= tv3;
    tv4 *= k.c3;
    let x1 = k.c2 - tv4;
    let gx1 = x1.square() * x1 + Fq::from(3u64);
    let e1 = is_square(&gx1);
    let x2 = k.c2 + tv4;
    let gx2 = x2.square() * x2 + Fq::from(3u64);
    let e2 = is_square(&gx2) && !e1;
    let mut x3 = tv2.square();
    x3 *= tv3;
    x3 = x3.square();
    x3 *= k.c4;
    x3 += k.z;
    let x = if e1 {
        x1
    } else if e2 {
        x2
    } else {
        x3
    };
    let gx = x.square() * x + Fq::from(3u64);
    let mut y = gx.sqrt().expect("selected x has square gx by construction");
    if sgn0(u) != sgn0(&y) {
        y = -y;
    }
    G1Affine::new_unchecked(x, y)
}

/// hash_to_curve for G1: two map evaluations summed. Cofactor is one, so no
/// clearing step.
pub(crate) fn hash_to_g1_inner(msg: &[u8], dst: &[u8]) -> G1Affine {
    let (u0, u1) = hash_to_field(msg, dst);
    let q0 = map_to_curve(&u0);
    let q1 = map_to_curve(&u1);
    let p: G1Affine = (q0 + q1).into();
    debug_assert!(p.is_on_curve() && p.is_in_correct_subgroup_assuming_on_curve());
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use ark_ec::AffineRepr;

    // expand_message_xmd vectors from RFC 9380 appendix K.1
    // (SHA-256, DST "QUUX-V01-CS02-with-expander-SHA256-128").
    const XMD_DST: &[u8] = b"QUUX-V01-CS02-with-expander-SHA256-128";

    #[test]
    fn xmd_empty_msg_len32() {
        assert_eq!(
            hex::encode(expand_message_xmd(b"", XMD_DST, 32)),
            "68a985b87eb6b46952128911f2a4412bbc302a9d759667f87f7a21d803f07235"
        );
    }

    #[test]
    fn xmd_abc_len32() {
        assert_eq!(
            hex::encode(expand_message_xmd(b"abc", XMD_DST, 32)),
            "d8ccab23b5985ccea865c6c97b6e5b8350e794e603b4b97902f53a8a0d605615"
        );
    }

    #[test]
    fn xmd_abcdef_len32() {
        assert_eq!(
            hex::encode(expand_message_xmd(b"abcdef0123456789", XMD_DST, 32)),
            "eff31487c770a893cfb36f912fbfcbff40d5661771ca4b2cb4eafe524333f5c1"
        );
    }

    #[test]
    fn xmd_len_128_prefix_consistent() {
        // Longer outputs extend shorter ones only across whole blocks; check
        // the 96-byte request (the length hash_to_field uses) is internally
        // consistent with ell = 3.
        let out = expand_message_xmd(b"abc", XMD_DST, 96);
        assert_eq!(out.len(), 96);
        let again = expand_message_xmd(b"abc", XMD_DST, 96);
        assert_eq!(out, again);
    }

    #[test]
    fn svdw_constants_match_curve() {
        let k = constants();
        assert_eq!(k.c1, Fq::from(4u64));
        assert_eq!(k.c2 * Fq::from(2u64), -Fq::from(1u64));
        assert_eq!(k.c3.square(), -Fq::from(12u64));
        assert_eq!(sgn0(&k.c3), 0);
        assert_eq!(k.c4 * Fq::from(3u64), -Fq::from(16u64));
    }

    #[test]
    fn mapped_points_on_curve() {
        for i in 0u32..50 {
            let (u0, u1) = hash_to_field(&i.to_be_bytes(), b"test-dst");
            for u in [u0, u1] {
                let p = map_to_curve(&u);
                assert!(p.is_on_curve());
            }
        }
    }

    #[test]
    fn hash_to_g1_deterministic_and_injective_in_practice() {
        let a1 = hash_to_g1_inner(b"alpha", b"dst");
        let a2 = hash_to_g1_inner(b"alpha", b"dst");
        let b = hash_to_g1_inner(b"beta", b"dst");
        assert_eq!(a1, a2);
        assert_ne!(a1, b);
        // distinct DSTs give distinct points
        let c = hash_to_g1_inner(b"alpha", b"dst2");
        assert_ne!(a1, c);
        assert!(!a1.is_zero());
    }
}
