//! Meta-transactions: transfers signed off-chain over a typed, two-level
//! digest (domain hash and body hash under a fixed prefix) and relayed to the
//! ledger by a third party. The relayer learns nothing it can abuse: the
//! signature binds every transfer field plus the target ledger's domain, and
//! settlement re-derives the digest from its own domain.

use serde::{Deserialize, Serialize};

use crate::ledger::{AnnouncementEvent, LedgerError, LedgerState, TransferBody, TransferTx};
use crate::ngs::{sign, uvf, MasterSecret, NgsSignature, SignError};
use crate::pairing::keccak_digest;

/// Context a typed digest commits to beyond the transfer fields. Two ledgers
/// with different ids never accept each other's signatures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedDomain {
    pub name: String,
    pub version: String,
    pub ledger_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedTransferMessage {
    pub domain: TypedDomain,
    pub body: TransferBody,
}

/// Wire envelope between a wallet and the ledger: the typed message, the
/// nickname signature over its digest, and the forwarding party's id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaTransaction {
    pub message: TypedTransferMessage,
    pub ngs_sig: NgsSignature,
    pub relayer_id: String,
}

fn domain_separator(domain: &TypedDomain) -> [u8; 32] {
    let mut buf = Vec::with_capacity(96);
    buf.extend_from_slice(&keccak_digest(domain.name.as_bytes()));
    buf.extend_from_slice(&keccak_digest(domain.version.as_bytes()));
    buf.extend_from_slice(&keccak_digest(domain.ledger_id.as_bytes()));
    keccak_digest(&buf)
}

/// Two-level typed digest: keccak(0x19 ‖ 0x01 ‖ H(domain) ‖ H(body)). The
/// leading bytes make the preimage an invalid start of any raw transaction
/// encoding, so typed signatures cannot be replayed as something else.
pub fn typed_digest(msg: &TypedTransferMessage) -> [u8; 32] {
    let mut buf = Vec::with_capacity(66);
    buf.push(0x19);
    buf.push(0x01);
    buf.extend_from_slice(&domain_separator(&msg.domain));
    buf.extend_from_slice(&keccak_digest(&msg.body.to_bytes()));
    keccak_digest(&buf)
}

/// Sign a typed transfer with the sender's master secret. Fails if the
/// secret does not own `msg.body.sender`. The relayer id starts empty; the
/// forwarding party stamps itself in with [`MetaTransaction::with_relayer`].
pub fn build_meta_tx<R: rand::RngCore + rand::CryptoRng>(
    msg: &TypedTransferMessage,
    msk: &MasterSecret,
    rng: &mut R,
) -> Result<MetaTransaction, SignError> {
    let digest = typed_digest(msg);
    let ngs_sig = sign(&msg.body.sender, msk, &digest, rng)?;
    Ok(MetaTransaction {
        message: msg.clone(),
        ngs_sig,
        relayer_id: String::new(),
    })
}

impl MetaTransaction {
    pub fn with_relayer(mut self, relayer_id: &str) -> Self {
        self.relayer_id = relayer_id.to_string();
        self
    }
}

/// Relay a meta-transaction into the ledger. The signature is checked over
/// the message's own digest before anything else; every remaining check
/// (recipient membership, nonce, funds) and all mutation happen inside
/// [`LedgerState::transfer`], which re-derives the digest under its own
/// domain. Errors never mutate the ledger.
pub fn execute(
    mtx: &MetaTransaction,
    ledger: &mut LedgerState,
) -> Result<AnnouncementEvent, LedgerError> {
    let digest = typed_digest(&mtx.message);
    if !uvf(&mtx.message.body.sender, &digest, &mtx.ngs_sig) {
        return Err(LedgerError::BadSignature);
    }
    ledger.transfer(&TransferTx {
        body: mtx.message.body.clone(),
        sig: mtx.ngs_sig,
    })
}
