//! Deterministic simulated ledger: a master-public-key registry controlled by
//! the issuer, nickname-addressed token accounts, mint and transfer
//! settlement with full verification, and an append-only announcement log
//! exposing recipient nicknames.
//!
//! Settlement is atomic: every check runs before the first state mutation, so
//! a rejected transaction leaves the state bit-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ds::{ds_verify, DsPublicKey, DsSignature};
use crate::meta_tx::{typed_digest, TypedDomain, TypedTransferMessage};
use crate::ngs::{gvf, uvf, IssuerPublicKey, MasterPublicKey, Nickname, NgsSignature, UserId};
use crate::pairing::{keccak_digest, MalformedEncoding, SchemeParams};

/// Domain tag under which mint authorizations are digested and signed.
const MINT_TAG: &[u8] = b"nickpay.mint.v1";

/// 32-byte account address: keccak-256 of the serialized nickname triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NicknameAddress(pub [u8; 32]);

pub fn nickname_address(nk: &Nickname) -> NicknameAddress {
    NicknameAddress(keccak_digest(&nk.to_bytes()))
}

impl NicknameAddress {
    pub const BYTES: usize = 32;

    pub fn to_bytes(&self) -> [u8; 32] {
        self.0
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        let arr: [u8; 32] = bytes
            .try_into()
            .map_err(|_| MalformedEncoding("NicknameAddress: wrong length"))?;
        Ok(NicknameAddress(arr))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl std::fmt::Display for NicknameAddress {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for NicknameAddress {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for NicknameAddress {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let bytes = hex::decode(&s).map_err(|_| serde::de::Error::custom("address: invalid hex"))?;
        NicknameAddress::from_bytes(&bytes).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Account {
    pub nickname: Nickname,
    pub balance: u128,
    pub nonce: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    Mint,
    Transfer,
}

/// Log entry emitted on every settled operation. Exposes only the recipient
/// nickname; senders stay off the log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnouncementEvent {
    pub kind: EventKind,
    pub recipient: Nickname,
    pub amount: u128,
    pub sequence: u64,
}

/// Caller identity for access-controlled ledger entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Issuer,
    Supervisor,
    MintingAuthority,
    User,
    Relayer,
    Auditor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MintTx {
    pub recipient: Nickname,
    pub amount: u128,
    pub nonce: u64,
    pub authority_sig: DsSignature,
}

/// The signed fields of a transfer; the typed digest commits to exactly
/// these under the ledger's domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferBody {
    pub sender: Nickname,
    pub recipient: Nickname,
    pub amount: u128,
    pub nonce: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferTx {
    pub body: TransferBody,
    pub sig: NgsSignature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LedgerError {
    #[error("caller role is not allowed to perform this operation")]
    Forbidden,
    #[error("mint recipient nickname is not a group member")]
    NotInGroup,
    #[error("minting authority signature rejected")]
    BadAuthoritySig,
    #[error("minting authority nonce does not match")]
    StaleAuthorityNonce,
    #[error("transfer recipient nickname is not a group member")]
    RecipientNotInGroup,
    #[error("transfer signature rejected")]
    BadSignature,
    #[error("transfer nonce does not match the sender account")]
    StaleNonce,
    #[error("sender balance is insufficient")]
    InsufficientFunds,
    #[error("sender account does not exist")]
    UnknownSenderAccount,
    #[error("balance arithmetic overflow")]
    Overflow,
}

/// The whole on-ledger world: registry, accounts, event log, and the
/// verification keys settlement runs against. Carries its scheme parameters
/// and typed-message domain so digests and pairing checks need no ambient
/// context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerState {
    params: SchemeParams,
    domain: TypedDomain,
    issuer_pub: IssuerPublicKey,
    authority_key: DsPublicKey,
    registry: BTreeMap<UserId, MasterPublicKey>,
    accounts: BTreeMap<NicknameAddress, Account>,
    events: Vec<AnnouncementEvent>,
    authority_nonce: u64,
    total_minted: u128,
}

impl LedgerState {
    pub fn new(
        params: SchemeParams,
        domain: TypedDomain,
        issuer_pub: IssuerPublicKey,
        authority_key: DsPublicKey,
    ) -> Self {
        LedgerState {
            params,
            domain,
            issuer_pub,
            authority_key,
            registry: BTreeMap::new(),
            accounts: BTreeMap::new(),
            events: Vec::new(),
            authority_nonce: 0,
            total_minted: 0,
        }
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn domain(&self) -> &TypedDomain {
        &self.domain
    }

    pub fn issuer_pub(&self) -> &IssuerPublicKey {
        &self.issuer_pub
    }

    pub fn authority_key(&self) -> &DsPublicKey {
        &self.authority_key
    }

    /// Next nonce a mint authorization must carry.
    pub fn authority_nonce(&self) -> u64 {
        self.authority_nonce
    }

    pub fn total_minted(&self) -> u128 {
        self.total_minted
    }

    /// Issuer-only write into the public key registry. Re-registering an
    /// identical mpk is a no-op; the issuer may overwrite.
    pub fn register_mpk(
        &mut self,
        caller: Role,
        user_id: &str,
        mpk: &MasterPublicKey,
    ) -> Result<(), LedgerError> {
        if caller != Role::Issuer {
            return Err(LedgerError::Forbidden);
        }
        self.registry.insert(user_id.to_string(), mpk.clone());
        Ok(())
    }

    pub fn registered_mpk(&self, user_id: &str) -> Option<&MasterPublicKey> {
        self.registry.get(user_id)
    }

    pub fn registry(&self) -> &BTreeMap<UserId, MasterPublicKey> {
        &self.registry
    }

    pub fn accounts(&self) -> &BTreeMap<NicknameAddress, Account> {
        &self.accounts
    }

    pub fn get_balance(&self, addr: &NicknameAddress) -> u128 {
        self.accounts.get(addr).map_or(0, |a| a.balance)
    }

    pub fn get_nonce(&self, addr: &NicknameAddress) -> u64 {
        self.accounts.get(addr).map_or(0, |a| a.nonce)
    }

    pub fn events(&self) -> &[AnnouncementEvent] {
        &self.events
    }

    /// Contiguous suffix of the log starting at `from_sequence`.
    pub fn scan_events(&self, from_sequence: u64) -> &[AnnouncementEvent] {
        let start = (from_sequence as usize).min(self.events.len());
        &self.events[start..]
    }

    pub fn balances_sum(&self) -> u128 {
        self.accounts
            .values()
            .fold(0u128, |acc, a| acc.checked_add(a.balance).expect("sum of balances bounded by total minted"))
    }

    /// Digest the minting authority signs: keccak over a domain tag and the
    /// canonical (recipient, amount, nonce) encoding.
    pub fn mint_digest(recipient: &Nickname, amount: u128, nonce: u64) -> [u8; 32] {
        let mut buf = Vec::with_capacity(MINT_TAG.len() + Nickname::BYTES + 16 + 8);
        buf.extend_from_slice(MINT_TAG);
        buf.extend_from_slice(&recipient.to_bytes());
        buf.extend_from_slice(&amount.to_be_bytes());
        buf.extend_from_slice(&nonce.to_be_bytes());
        keccak_digest(&buf)
    }

    /// Settle a mint. Checks, in order: authority nonce, authority
    /// signature, group membership of the recipient, overflow.
    pub fn mint(&mut self, tx: &MintTx) -> Result<AnnouncementEvent, LedgerError> {
        if tx.nonce != self.authority_nonce {
            return Err(LedgerError::StaleAuthorityNonce);
        }
        let digest = Self::mint_digest(&tx.recipient, tx.amount, tx.nonce);
        if !ds_verify(&self.params, &self.authority_key, &digest, &tx.authority_sig) {
            return Err(LedgerError::BadAuthoritySig);
        }
        if !gvf(&self.params, &self.issuer_pub, &tx.recipient) {
            return Err(LedgerError::NotInGroup);
        }
        let new_total = self
            .total_minted
            .checked_add(tx.amount)
            .ok_or(LedgerError::Overflow)?;
        let addr = nickname_address(&tx.recipient);
        let credited = self
            .get_balance(&addr)
            .checked_add(tx.amount)
            .ok_or(LedgerError::Overflow)?;

        let account = self.accounts.entry(addr).or_insert_with(|| Account {
            nickname: tx.recipient.clone(),
            balance: 0,
            nonce: 0,
        });
        account.balance = credited;
        self.total_minted = new_total;
        self.authority_nonce += 1;
        Ok(self.announce(EventKind::Mint, tx.recipient.clone(), tx.amount))
    }

    /// Settle a transfer. Checks, in order: sender account exists, exact
    /// nonce match, signature over the typed digest, group membership of the
    /// recipient, funds, overflow. The nickname controller's consent is
    /// exactly the signature check.
    pub fn transfer(&mut self, tx: &TransferTx) -> Result<AnnouncementEvent, LedgerError> {
        let sender_addr = nickname_address(&tx.body.sender);
        let Some(sender) = self.accounts.get(&sender_addr) else {
            return Err(LedgerError::UnknownSenderAccount);
        };
        if tx.body.nonce != sender.nonce {
            return Err(LedgerError::StaleNonce);
        }
        let digest = typed_digest(&TypedTransferMessage {
            domain: self.domain.clone(),
            body: tx.body.clone(),
        });
        if !uvf(&tx.body.sender, &digest, &tx.sig) {
            return Err(LedgerError::BadSignature);
        }
        if !gvf(&self.params, &self.issuer_pub, &tx.body.recipient) {
            return Err(LedgerError::RecipientNotInGroup);
        }
        if sender.balance < tx.body.amount {
            return Err(LedgerError::InsufficientFunds);
        }
        let recipient_addr = nickname_address(&tx.body.recipient);
        let recipient_balance = if recipient_addr == sender_addr {
            sender.balance - tx.body.amount
        } else {
            self.get_balance(&recipient_addr)
        };
        if recipient_balance.checked_add(tx.body.amount).is_none() {
            return Err(LedgerError::Overflow);
        }

        {
            let sender = self.accounts.get_mut(&sender_addr).expect("checked above");
            sender.balance -= tx.body.amount;
            sender.nonce += 1;
        }
        let recipient = self
            .accounts
            .entry(recipient_addr)
            .or_insert_with(|| Account {
                nickname: tx.body.recipient.clone(),
                balance: 0,
                nonce: 0,
            });
        recipient.balance = recipient
            .balance
            .checked_add(tx.body.amount)
            .expect("checked above");
        Ok(self.announce(EventKind::Transfer, tx.body.recipient.clone(), tx.body.amount))
    }

    fn announce(&mut self, kind: EventKind, recipient: Nickname, amount: u128) -> AnnouncementEvent {
        let event = AnnouncementEvent {
            kind,
            recipient,
            amount,
            sequence: self.events.len() as u64,
        };
        self.events.push(event.clone());
        event
    }
}

impl MintTx {
    pub const BYTES: usize = Nickname::BYTES + 16 + 8 + DsSignature::BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::BYTES);
        out.extend_from_slice(&self.recipient.to_bytes());
        out.extend_from_slice(&self.amount.to_be_bytes());
        out.extend_from_slice(&self.nonce.to_be_bytes());
        out.extend_from_slice(&self.authority_sig.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("MintTx: wrong length"));
        }
        let mut at = 0;
        let recipient = Nickname::from_bytes(&bytes[at..at + Nickname::BYTES])?;
        at += Nickname::BYTES;
        let amount = u128::from_be_bytes(bytes[at..at + 16].try_into().unwrap());
        at += 16;
        let nonce = u64::from_be_bytes(bytes[at..at + 8].try_into().unwrap());
        at += 8;
        let authority_sig = DsSignature::from_bytes(&bytes[at..])?;
        Ok(MintTx {
            recipient,
            amount,
            nonce,
            authority_sig,
        })
    }
}

impl TransferBody {
    pub const BYTES: usize = 2 * Nickname::BYTES + 16 + 8;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::BYTES);
        out.extend_from_slice(&self.sender.to_bytes());
        out.extend_from_slice(&self.recipient.to_bytes());
        out.extend_from_slice(&self.amount.to_be_bytes());
        out.extend_from_slice(&self.nonce.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("TransferBody: wrong length"));
        }
        let mut at = 0;
        let sender = Nickname::from_bytes(&bytes[at..at + Nickname::BYTES])?;
        at += Nickname::BYTES;
        let recipient = Nickname::from_bytes(&bytes[at..at + Nickname::BYTES])?;
        at += Nickname::BYTES;
        let amount = u128::from_be_bytes(bytes[at..at + 16].try_into().unwrap());
        at += 16;
        let nonce = u64::from_be_bytes(bytes[at..at + 8].try_into().unwrap());
        Ok(TransferBody {
            sender,
            recipient,
            amount,
            nonce,
        })
    }
}

impl TransferTx {
    pub const BYTES: usize = TransferBody::BYTES + NgsSignature::BYTES;

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.body.to_bytes();
        out.extend_from_slice(&self.sig.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, MalformedEncoding> {
        if bytes.len() != Self::BYTES {
            return Err(MalformedEncoding("TransferTx: wrong length"));
        }
        Ok(TransferTx {
            body: TransferBody::from_bytes(&bytes[..TransferBody::BYTES])?,
            sig: NgsSignature::from_bytes(&bytes[TransferBody::BYTES..])?,
        })
    }
}
