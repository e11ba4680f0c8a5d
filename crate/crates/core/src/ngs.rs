//! The nickname group-signature scheme.
//!
//! Members are published as a master public key `mpk = (u, v, w)` in G1 with
//! `u = H(f)`, `w = u^α`, and `v = u^x · w^y` under the issuer secret
//! `(x, y)`. Any party can re-randomize an mpk into a nickname
//! `(u^r, v^r, w^r)`; the whole class shares the owner's exponent `α`, so
//! the owner's trapdoor `τ = ĝ^α` traces every class member via a pairing
//! check, and a Schnorr proof of `α` signs under any nickname of the class.
//! Joining escrows `τ` to the opener (ElGamal in G2), which lets the opener
//! identify the member behind any nickname and prove the attribution.
//!
//! Verification is split: [`gvf`] decides group membership of a nickname from
//! the issuer public key alone and never reads a signature; [`uvf`] decides
//! signature validity from the nickname alone and never reads the issuer
//! public key. [`open`] takes only a nickname, never a message or signature.

use std::collections::{BTreeMap, BTreeSet};

use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};

use crate::counters;
use crate::ds::{ds_sign, ds_verify, DsPublicKey, DsSecretKey, DsSignature};
use crate::pairing::{
    hash_to_g1, pair, random_scalar, G1Elem, G2Elem, GtElem, MalformedEncoding, Scalar,
    SchemeParams, G1_BYTES, G2_BYTES, GT_BYTES, SCALAR_BYTES,
};
use crate::proofs::Transcript;

const SIG_TAG: &[u8] = b"nickpay.ngs.sig.v1";
const JOIN_TAG: &[u8] = b"nickpay.ngs.join.v1";
const OPEN_TAG: &[u8] = b"nickpay.ngs.open.v1";

pub type UserId = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssuerSecretKey {
    pub(crate) x: Scalar,
    pub(crate) y: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssuerPublicKey {
    pub x_hat: G2Elem,
    pub y_hat: G2Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssuerKeyPair {
    pub isk: IssuerSecretKey,
    pub ipk: IssuerPublicKey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenerSecretKey {
    pub(crate) z: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenerPublicKey {
    pub z_hat: G2Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenerKeyPair {
    pub osk: OpenerSecretKey,
    pub opk: OpenerPublicKey,
}

/// Long-term user identity: a conventional signing key pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserKeyPair {
    pub usk: DsSecretKey,
    pub upk: DsPublicKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterPublicKey {
    pub u: G1Elem,
    pub v: G1Elem,
    pub w: G1Elem,
}

/// Re-randomized class representative (u^r, v^r, w^r), r ≠ 0. An mpk is a
/// nickname of its own class (r = 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nickname {
    pub u: G1Elem,
    pub v: G1Elem,
    pub w: G1Elem,
}

/// The member exponent α. Held only by the member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterSecret {
    pub(crate) alpha: Scalar,
}

/// τ = ĝ^α. Traces every nickname (u, ·, w) with w = u^α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trapdoor {
    pub tau: G2Elem,
}

/// ElGamal ciphertext in G2: (ĝ^s, τ · Ẑ^s).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncryptedTrapdoor {
    pub s_hat: G2Elem,
    pub f_prime: G2Elem,
}

/// Proof for the join conjunction
/// f = g^α ∧ w = H(f)^α ∧ Ŝ = ĝ^s ∧ f' = ĝ^α · Ẑ^s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinProof {
    pub challenge: Scalar,
    pub z_alpha: Scalar,
    pub z_s: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinRequest {
    pub f: G1Elem,
    pub w: G1Elem,
    pub enc_trapdoor: EncryptedTrapdoor,
    pub proof_join: JoinProof,
    pub sig_ds: DsSignature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegEntry {
    pub f: G1Elem,
    pub enc_trapdoor: EncryptedTrapdoor,
    pub rho: GtElem,
    pub sig_ds: DsSignature,
}

/// Schnorr proof of α with w = u^α, bound to the full nickname and message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgsSignature {
    pub challenge: Scalar,
    pub response: Scalar,
}

/// Proof of knowledge of Ŵ with e(u, Ŵ) = e(w, ĝ) and e(g, Ŵ) = ρ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenProof {
    pub challenge: Scalar,
    pub z_hat: G2Elem,
}

/// Everything the opener hands a judge: the registered ρ, the member's
/// signature on ρ, and the trapdoor knowledge proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpeningProof {
    pub rho: GtElem,
    pub sig_ds: DsSignature,
    pub proof_open: OpenProof,
}

/// Issuer-side group record. `seen_f` keys are lowercase hex of the
/// serialized f, one per join session ever accepted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct GroupState {
    pub mpk_table: BTreeMap<UserId, MasterPublicKey>,
    pub reg_table: BTreeMap<UserId, RegEntry>,
    pub upk_table: BTreeMap<UserId, DsPublicKey>,
    pub seen_f: BTreeSet<String>,
}

impl GroupState {
    pub fn new() -> Self {
        Self::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IssError {
    /// The request's f was already used in a join session.
    #[error("duplicate f: commitment already used in a join session")]
    DuplicateF,
    /// The join proof does not verify.
    #[error("join proof rejected")]
    BadProof,
    /// The identity signature does not verify under the user's registered key.
    #[error("identity signature rejected")]
    BadDsSig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignError {
    /// The master secret does not match the nickname (w ≠ u^α).
    #[error("master secret does not own the nickname")]
    NotOwner,
}

pub fn ikg<R: RngCore + CryptoRng>(params: &SchemeParams, rng: &mut R) -> IssuerKeyPair {
    let x = random_scalar(rng);
    let y = random_scalar(rng);
    let isk = IssuerSecretKey { x, y };
    IssuerKeyPair {
        isk,
        ipk: isk.public(params),
    }
}

impl IssuerSecretKey {
    pub fn public(&self, params: &SchemeParams) -> IssuerPublicKey {
        IssuerPublicKey {
            x_hat: params.g_hat().mul(&self.x),
            y_hat: params.g_hat().mul(&self.y),
        }
    }
}

pub fn okg<R: RngCore + CryptoRng>(params: &SchemeParams, rng: &mut R) -> OpenerKeyPair {
    let z = random_scalar(rng);
    OpenerKeyPair {
        osk: OpenerSecretKey { z },
        opk: OpenerPublicKey {
            z_hat: params.g_hat().mul(&z),
        },
    }
}

pub fn ukg<R: RngCore + CryptoRng>(params: &SchemeParams, rng: &mut R) -> UserKeyPair {
    let kp = crate::ds::ds_keygen(params, rng);
    UserKeyPair {
        usk: kp.sk,
        upk: kp.pk,
    }
}

fn join_challenge(
    ipk: &IssuerPublicKey,
    opk: &OpenerPublicKey,
    f: &G1Elem,
    u: &G1Elem,
    w: &G1Elem,
    enc: &EncryptedTrapdoor,
    commitments: &[&[u8]],
) -> Scalar {
    let mut t = Transcript::new(JOIN_TAG);
    t.append(&ipk.to_bytes())
        .append(&opk.to_bytes())
        .append(&f.to_bytes())
        .append(&u.to_bytes())
        .append(&w.to_bytes())
        .append(&enc.to_bytes());
    for c in commitments {
        t.append(c);
    }
    t.challenge()
}

/// User side of the joining protocol. Picks the member exponent α and the
/// escrow randomness s, commits f = g^α, derives the class base u = H(f),
/// encrypts the trapdoor to the opener, proves the whole conjunction, and
/// signs ρ = e(f, ĝ) with the long-term identity key.
pub fn join<R: RngCore + CryptoRng>(
    params: &SchemeParams,
    usk: &DsSecretKey,
    ipk: &IssuerPublicKey,
    opk: &OpenerPublicKey,
    rng: &mut R,
) -> (MasterSecret, Trapdoor, JoinRequest) {
    let alpha = random_scalar(rng);
    let s = random_scalar(rng);

    let f = params.g().mul(&alpha);
    let u = hash_to_g1(&f.to_bytes());
    let w = u.mul(&alpha);
    let tau = params.g_hat().mul(&alpha);
    let enc = EncryptedTrapdoor {
        s_hat: params.g_hat().mul(&s),
        f_prime: tau.add(&opk.z_hat.mul(&s)),
    };

    let r_alpha = random_scalar(rng);
    let r_s = random_scalar(rng);
    let t1 = params.g().mul(&r_alpha);
    let t2 = u.mul(&r_alpha);
    let t3 = params.g_hat().mul(&r_s);
    let t4 = params.g_hat().mul(&r_alpha).add(&opk.z_hat.mul(&r_s));
    let c = join_challenge(
        ipk,
        opk,
        &f,
        &u,
        &w,
        &enc,
        &[&t1.to_bytes(), &t2.to_bytes(), &t3.to_bytes(), &t4.to_bytes()],
    );
    let proof = JoinProof {
        challenge: c,
        z_alpha: r_alpha.add(&c.mul(&alpha)),
        z_s: r_s.add(&c.mul(&s)),
    };

    let rho = pair(&f, params.g_hat());
    let sig_ds = ds_sign(params, usk, &rho.to_bytes(), rng);

    (
        MasterSecret { alpha },
        Trapdoor { tau },
        JoinRequest {
            f,
            w,
            enc_trapdoor: enc,
            proof_join: proof,
            sig_ds,
        },
    )
}

fn verify_join_proof(
    params: &SchemeParams,
    ipk: &IssuerPublicKey,
    opk: &OpenerPublicKey,
    f: &G1Elem,
    u: &G1Elem,
    w: &G1Elem,
    enc: &EncryptedTrapdoor,
    proof: &JoinProof,
) -> bool {
    let c_neg = proof.challenge.neg();
    let t1 = params.g().mul(&proof.z_alpha).add(&f.mul(&c_neg));
    let t2 = u.mul(&proof.z_alpha).add(&w.mul(&c_neg));
    let t3 = params.g_hat().mul(&proof.z_s).add(&enc.s_hat.mul(&c_neg));
    let t4 = params
        .g_hat()
        .mul(&proof.z_alpha)
        .add(&opk.z_hat.mul(&proof.z_s))
        .add(&enc.f_prime.mul(&c_neg));
    let c = join_challenge(
        ipk,
        opk,
        f,
        u,
        w,
        enc,
        &[&t1.to_bytes(), &t2.to_bytes(), &t3.to_bytes(), &t4.to_bytes()],
    );
    c == proof.challenge
}

/// Issuer side of the joining protocol. Checks, in order: f unused, join
/// proof valid, identity signature valid under the registered key for
/// `user_id`. On success stores mpk and registration entry and marks f used.
///
/// Panics if `user_id` has no key in `state.upk_table`; registering the
/// user's verification key is a precondition of issuing.
pub fn iss(
    params: &SchemeParams,
    user_id: &UserId,
    isk: &IssuerSecretKey,
    req: &JoinRequest,
    opk: &OpenerPublicKey,
    state: &mut GroupState,
) -> Result<MasterPublicKey, IssError> {
    let f_hex = hex::encode(req.f.to_bytes());
    if state.seen_f.contains(&f_hex) {
        return Err(IssError::DuplicateF);
    }

    let u = hash_to_g1(&req.f.to_bytes());
    let ipk = isk.public(params);
    if !verify_join_proof(
        params,
        &ipk,
        opk,
        &req.f,
        &u,
        &req.w,
        &req.enc_trapdoor,
        &req.proof_join,
    ) {
        return Err(IssError::BadProof);
    }

    let upk = state
        .upk_table
        .get(user_id)
        .expect("user verification key must be registered before issuing");
    let rho = pair(&req.f, params.g_hat());
    if !ds_verify(params, upk, &rho.to_bytes(), &req.sig_ds) {
        return Err(IssError::BadDsSig);
    }

    let v = u.mul(&isk.x).add(&req.w.mul(&isk.y));
    let mpk = MasterPublicKey { u, v, w: req.w };
    state.mpk_table.insert(user_id.clone(), mpk.clone());
    state.reg_table.insert(
        user_id.clone(),
        RegEntry {
            f: req.f,
            enc_trapdoor: req.enc_trapdoor,
            rho,
            sig_ds: req.sig_ds,
        },
    );
    state.seen_f.insert(f_hex);
    Ok(mpk)
}

/// Fresh nickname (u^r, v^r, w^r) for uniformly random r ≠ 0.
pub fn nick<R: RngCore + CryptoRng>(mpk: &MasterPublicKey, rng: &mut R) -> Nickname {
    nick_with_randomizer(mpk, &random_scalar(rng))
}

/// Deterministic re-randomization. r = 1 reproduces the mpk itself; r = 0 is
/// rejected because it degenerates to the identity triple.
pub fn nick_with_randomizer(mpk: &MasterPublicKey, r: &Scalar) -> Nickname {
    assert!(!r.is_zero(), "nickname randomizer must be nonzero");
    Nickname {
        u: mpk.u.mul(r),
        v: mpk.v.mul(r),
        w: mpk.w.mul(r),
    }
}

/// Class membership test: e(u, τ) = e(w, ĝ). True exactly when the nickname
/// belongs to the trapdoor owner's class.
pub fn trace(params: &SchemeParams, tau: &Trapdoor, nk: &Nickname) -> bool {
    pair(&nk.u, &tau.tau) == pair(&nk.w, params.g_hat())
}

/// Sign msg under a nickname of the caller's own class.
pub fn sign<R: RngCore + CryptoRng>(
    nk: &Nickname,
    msk: &MasterSecret,
    msg: &[u8],
    rng: &mut R,
) -> Result<NgsSignature, SignError> {
    if nk.u.mul(&msk.alpha) != nk.w {
        return Err(SignError::NotOwner);
    }
    let r = random_scalar(rng);
    let t = nk.u.mul(&r);
    let c = sig_challenge(nk, &t, msg);
    Ok(NgsSignature {
        challenge: c,
        response: r.add(&c.mul(&msk.alpha)),
    })
}

fn sig_challenge(nk: &Nickname, commitment: &G1Elem, msg: &[u8]) -> Scalar {
    Transcript::new(SIG_TAG)
        .append(&nk.to_bytes())
        .append(&commitment.to_bytes())
        .append(msg)
        .challenge()
}

/// Group membership of a nickname: e(v, ĝ) = e(u, X̂) · e(w, Ŷ). Evaluates
/// exactly three pairings and reads no signature.
pub fn gvf(params: &SchemeParams, ipk: &IssuerPublicKey, nk: &Nickname) -> bool {
    counters::bump_gvf();
    let lhs = pair(&nk.v, params.g_hat());
    let rhs = pair(&nk.u, &ipk.x_hat).mul(&pair(&nk.w, &ipk.y_hat));
    lhs == rhs
}

/// Signature validity under a nickname. Pairing-free and reads no issuer key.
pub fn uvf(nk: &Nickname, msg: &[u8], sig: &NgsSignature) -> bool {
    counters::bump_uvf();
    // u^s · w^(-c) reconstructs the commitment iff s = r + c·α with w = u^α
    let t = nk
        .u
        .mul(&sig.response)
        .add(&nk.w.mul(&sig.challenge.neg()));
    sig_challenge(nk, &t, msg) == sig.challenge
}

/// Recover τ from its escrow ciphertext: f' · Ŝ^(-z).
pub fn decrypt_trapdoor(osk: &OpenerSecretKey, enc: &EncryptedTrapdoor) -> Trapdoor {
    Trapdoor {
        tau: enc.f_prime.add(&enc.s_hat.mul(&osk.z.neg())),
    }
}

fn open_challenge(nk: &Nickname, rho: &GtElem, t1: &GtElem, t2: &GtElem) -> Scalar {
    Transcript::new(OPEN_TAG)
        .append(&nk.to_bytes())
        .append(&rho.to_bytes())
        .append(&t1.to_bytes())
        .append(&t2.to_bytes())
        .challenge()
}

/// Identify the member behind a nickname. Walks the registration table in
/// ascending user-id order, decrypts each escrowed trapdoor, and returns the
/// first user whose trapdoor traces the nickname and matches the registered
/// ρ, together with a judge-checkable proof. Takes only a nickname: no
/// message or signature is involved in opening.
pub fn open<R: RngCore + CryptoRng>(
    params: &SchemeParams,
    osk: &OpenerSecretKey,
    nk: &Nickname,
    state: &GroupState,
    rng: &mut R,
) -> Option<(UserId, OpeningProof)> {
    let target = pair(&nk.w, params.g_hat());
    for (user_id, entry) in &state.reg_table {
        let tau = decrypt_trapdoor(osk, &entry.enc_trapdoor).tau;
        if pair(&nk.u, &tau) != target || pair(params.g(), &tau) != entry.rho {
            continue;
        }
        // Chaum-Pedersen-style proof of the G2 witness across both pairings
        let k = random_scalar(rng);
        let k_hat = params.g_hat().mul(&k);
        let t1 = pair(&nk.u, &k_hat);
        let t2 = pair(params.g(), &k_hat);
        let c = open_challenge(nk, &entry.rho, &t1, &t2);
        let z_hat = k_hat.add(&tau.mul(&c));
        return Some((
            user_id.clone(),
            OpeningProof {
                rho: entry.rho,
                sig_ds: entry.sig_ds,
                proof_open: OpenProof {
                    challenge: c,
                    z_hat,
                },
            },
        ));
    }
    None
}

/// Accept or reject a claimed attribution. All three checks must pass: the
/// trapdoor knowledge proof, the member's identity signature on ρ under the
/// registered key for `user_id`, and group membership of the nickname.
pub fn judge(
    params: &SchemeParams,
    nk: &Nickname,
    ipk: &IssuerPublicKey,
    user_id: &UserId,
    proof: &OpeningProof,
    state: &GroupState,
) -> bool {
    let Some(upk) = state.upk_table.get(user_id) else {
        return false;
    };

    let c = proof.proof_open.challenge;
    let a = pair(&nk.w, params.g_hat());
    let t1 = pair(&nk.u, &proof.proof_open.z_hat).mul(&a.pow(&c).inverse());
    let t2 = pair(params.g(), &proof.proof_open.z_hat).mul(&proof.rho.pow(&c).inverse());
    if open_challenge(nk, &proof.rho, &t1, &t2) != c {
        return false;
    }

    if !ds_verify(params, upk, &proof.rho.to_bytes(), &proof.sig_ds) {
        return false;
    }

    gvf(params, ipk, nk)
}

// Canonical fixed-length byte layouts. Field order follows declaration
// order; see FORMATS.md.

impl IssuerPublicKey {
    pub const BYTES: usize = 2 * G2_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..G2_BYTES].copy_from_slice(&self.x_hat.to_bytes());
        out[G2_BYTES..].copy_from_slice(&self.y_hat.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("IssuerPublicKey: wrong length"));
        }
        Ok(IssuerPublicKey {
            x_hat: G2Elem::from_bytes(&bytes[..G2_BYTES])?,
            y_hat: G2Elem::from_bytes(&bytes[G2_BYTES..])?,
        })
    }
}

impl OpenerPublicKey {
    pub const BYTES: usize = G2_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        self.z_hat.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        Ok(OpenerPublicKey {
            z_hat: G2Elem::from_bytes(bytes)?,
        })
    }
}

impl MasterPublicKey {
    pub const BYTES: usize = 3 * G1_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        triple_bytes(&self.u, &self.v, &self.w)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        let (u, v, w) = triple_from_bytes(bytes, "MasterPublicKey")?;
        Ok(MasterPublicKey { u, v, w })
    }
}

impl Nickname {
    pub const BYTES: usize = 3 * G1_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        triple_bytes(&self.u, &self.v, &self.w)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        let (u, v, w) = triple_from_bytes(bytes, "Nickname")?;
        Ok(Nickname { u, v, w })
    }
}

impl From<MasterPublicKey> for Nickname {
    fn from(mpk: MasterPublicKey) -> Self {
        Nickname {
            u: mpk.u,
            v: mpk.v,
            w: mpk.w,
        }
    }
}

fn triple_bytes(u: &G1Elem, v: &G1Elem, w: &G1Elem) -> [u8; 3 * G1_BYTES] {
    let mut out = [0u8; 3 * G1_BYTES];
    out[..G1_BYTES].copy_from_slice(&u.to_bytes());
    out[G1_BYTES..2 * G1_BYTES].copy_from_slice(&v.to_bytes());
    out[2 * G1_BYTES..].copy_from_slice(&w.to_bytes());
    out
}

fn triple_from_bytes(
    bytes: &[u8],
    what: &'static str,
) -> Result<(G1Elem, G1Elem, G1Elem), MalformedEncoding> {
    if bytes.len() != 3 * G1_BYTES {
        return Err(MalformedEncoding(what));
    }
    Ok((
        G1Elem::from_bytes(&bytes[..G1_BYTES])?,
        G1Elem::from_bytes(&bytes[G1_BYTES..2 * G1_BYTES])?,
        G1Elem::from_bytes(&bytes[2 * G1_BYTES..])?,
    ))
}

impl Trapdoor {
    pub const BYTES: usize = G2_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        self.tau.to_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        Ok(Trapdoor {
            tau: G2Elem::from_bytes(bytes)?,
        })
    }
}

impl EncryptedTrapdoor {
    pub const BYTES: usize = 2 * G2_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..G2_BYTES].copy_from_slice(&self.s_hat.to_bytes());
        out[G2_BYTES..].copy_from_slice(&self.f_prime.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("EncryptedTrapdoor: wrong length"));
        }
        Ok(EncryptedTrapdoor {
            s_hat: G2Elem::from_bytes(&bytes[..G2_BYTES])?,
            f_prime: G2Elem::from_bytes(&bytes[G2_BYTES..])?,
        })
    }
}

impl JoinProof {
    pub const BYTES: usize = 3 * SCALAR_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..SCALAR_BYTES].copy_from_slice(&self.challenge.to_bytes());
        out[SCALAR_BYTES..2 * SCALAR_BYTES].copy_from_slice(&self.z_alpha.to_bytes());
        out[2 * SCALAR_BYTES..].copy_from_slice(&self.z_s.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("JoinProof: wrong length"));
        }
        Ok(JoinProof {
            challenge: Scalar::from_bytes(&bytes[..SCALAR_BYTES])?,
            z_alpha: Scalar::from_bytes(&bytes[SCALAR_BYTES..2 * SCALAR_BYTES])?,
            z_s: Scalar::from_bytes(&bytes[2 * SCALAR_BYTES..])?,
        })
    }
}

impl JoinRequest {
    pub const BYTES: usize =
        2 * G1_BYTES + EncryptedTrapdoor::BYTES + JoinProof::BYTES + DsSignature::BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::BYTES);
        out.extend_from_slice(&self.f.to_bytes());
        out.extend_from_slice(&self.w.to_bytes());
        out.extend_from_slice(&self.enc_trapdoor.to_bytes());
        out.extend_from_slice(&self.proof_join.to_bytes());
        out.extend_from_slice(&self.sig_ds.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("JoinRequest: wrong length"));
        }
        let mut at = 0;
        let f = G1Elem::from_bytes(&bytes[at..at + G1_BYTES])?;
        at += G1_BYTES;
        let w = G1Elem::from_bytes(&bytes[at..at + G1_BYTES])?;
        at += G1_BYTES;
        let enc = EncryptedTrapdoor::from_bytes(&bytes[at..at + EncryptedTrapdoor::BYTES])?;
        at += EncryptedTrapdoor::BYTES;
        let proof = JoinProof::from_bytes(&bytes[at..at + JoinProof::BYTES])?;
        at += JoinProof::BYTES;
        let sig = DsSignature::from_bytes(&bytes[at..])?;
        Ok(JoinRequest {
            f,
            w,
            enc_trapdoor: enc,
            proof_join: proof,
            sig_ds: sig,
        })
    }
}

impl RegEntry {
    pub const BYTES: usize = G1_BYTES + EncryptedTrapdoor::BYTES + GT_BYTES + DsSignature::BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::BYTES);
        out.extend_from_slice(&self.f.to_bytes());
        out.extend_from_slice(&self.enc_trapdoor.to_bytes());
        out.extend_from_slice(&self.rho.to_bytes());
        out.extend_from_slice(&self.sig_ds.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("RegEntry: wrong length"));
        }
        let mut at = 0;
        let f = G1Elem::from_bytes(&bytes[at..at + G1_BYTES])?;
        at += G1_BYTES;
        let enc = EncryptedTrapdoor::from_bytes(&bytes[at..at + EncryptedTrapdoor::BYTES])?;
        at += EncryptedTrapdoor::BYTES;
        let rho = GtElem::from_bytes(&bytes[at..at + GT_BYTES])?;
        at += GT_BYTES;
        let sig = DsSignature::from_bytes(&bytes[at..])?;
        Ok(RegEntry {
            f,
            enc_trapdoor: enc,
            rho,
            sig_ds: sig,
        })
    }
}

impl NgsSignature {
    pub const BYTES: usize = 2 * SCALAR_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..SCALAR_BYTES].copy_from_slice(&self.challenge.to_bytes());
        out[SCALAR_BYTES..].copy_from_slice(&self.response.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("NgsSignature: wrong length"));
        }
        Ok(NgsSignature {
            challenge: Scalar::from_bytes(&bytes[..SCALAR_BYTES])?,
            response: Scalar::from_bytes(&bytes[SCALAR_BYTES..])?,
        })
    }
}

impl OpenProof {
    pub const BYTES: usize = SCALAR_BYTES + G2_BYTES;

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[..SCALAR_BYTES].copy_from_slice(&self.challenge.to_bytes());
        out[SCALAR_BYTES..].copy_from_slice(&self.z_hat.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("OpenProof: wrong length"));
        }
        Ok(OpenProof {
            challenge: Scalar::from_bytes(&bytes[..SCALAR_BYTES])?,
            z_hat: G2Elem::from_bytes(&bytes[SCALAR_BYTES..])?,
        })
    }
}

impl OpeningProof {
    pub const BYTES: usize = GT_BYTES + DsSignature::BYTES + OpenProof::BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::BYTES);
        out.extend_from_slice(&self.rho.to_bytes());
        out.extend_from_slice(&self.sig_ds.to_bytes());
        out.extend_from_slice(&self.proof_open.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("OpeningProof: wrong length"));
        }
        let mut at = 0;
        let rho = GtElem::from_bytes(&bytes[at..at + GT_BYTES])?;
        at += GT_BYTES;
        let sig = DsSignature::from_bytes(&bytes[at..at + DsSignature::BYTES])?;
        at += DsSignature::BYTES;
        let proof = OpenProof::from_bytes(&bytes[at..])?;
        Ok(OpeningProof {
            rho,
            sig_ds: sig,
            proof_open: proof,
        })
    }
}
