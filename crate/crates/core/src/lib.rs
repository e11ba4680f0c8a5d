//! Nickname-based auditable payment protocol library.
//!
//! The crate is organized in four layers:
//!
//! - [`pairing`]: type-3 bilinear group arithmetic over BN254, hash-to-group,
//!   keccak-256 digests, and canonical serialization. Everything above is
//!   written against this interface.
//! - [`ngs`]: the nickname group-signature scheme: issuer/opener/user key
//!   generation, the joining protocol with escrowed tracing trapdoors,
//!   nickname derivation, signing, the split group/user verification
//!   functions, and provable opening.
//! - [`ledger`]: a deterministic simulated ledger with a master-public-key
//!   registry, nickname-addressed accounts, mint/transfer settlement, and an
//!   announcement event log.
//! - [`meta_tx`]: typed-structured transfer messages signed off-chain and
//!   relayed to the ledger by a third party.
//!
//! All group elements use fixed-length canonical encodings (see FORMATS.md at
//! the repository root); hex is lowercase without prefix wherever encodings
//! surface in files or CLI output.

pub mod counters;
pub mod ds;
mod hash_to_curve;
pub mod ledger;
pub mod meta_tx;
pub mod ngs;
pub mod pairing;
pub(crate) mod proofs;

pub use ds::{ds_keygen, ds_sign, ds_verify, DsKeyPair, DsPublicKey, DsSecretKey, DsSignature};
pub use ledger::{
    nickname_address, Account, AnnouncementEvent, EventKind, LedgerError, LedgerState, MintTx,
    NicknameAddress, Role, TransferBody, TransferTx,
};
pub use meta_tx::{
    build_meta_tx, execute, typed_digest, MetaTransaction, TypedDomain, TypedTransferMessage,
};
pub use ngs::{
    decrypt_trapdoor, gvf, ikg, iss, join, judge, nick, nick_with_randomizer, okg, open, sign,
    trace, ukg, uvf, EncryptedTrapdoor, GroupState, IssError, IssuerKeyPair, IssuerPublicKey,
    IssuerSecretKey, JoinProof, JoinRequest, MasterPublicKey, MasterSecret, Nickname, NgsSignature,
    OpenProof, OpenerKeyPair, OpenerPublicKey, OpenerSecretKey, OpeningProof, RegEntry, SignError,
    Trapdoor, UserId, UserKeyPair,
};
pub use pairing::{
    hash_to_g1, keccak_digest, pair, random_scalar, G1Elem, G2Elem, GtElem, MalformedEncoding,
    Scalar, SchemeParams,
};
