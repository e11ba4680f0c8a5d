//! Persistent simulation state: every actor's keys, the group record, and
//! the ledger, plus deterministic per-actor randomness.
//!
//! The world file deliberately holds all secrets in one place. This is a
//! simulation harness; the point is replayable multi-actor scenarios, not
//! key custody. Capability separation is enforced by the operation
//! signatures in `actors` and `scenario`, which hand each actor only the
//! fields its real-world counterpart would hold.

use nickpay_core::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const STATE_FORMAT: &str = "nickpay-world/v1";

/// Seed derivation tag. Stream key = keccak(tag, seed, actor, counter), so
/// actors draw from independent streams and a replay with the same seed
/// reproduces every draw in order.
const RNG_STREAM_TAG: &[u8] = b"nickpay.rng.v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UserRecord {
    pub keys: UserKeyPair,
    /// Present once the user has completed a join exchange.
    pub msk: Option<MasterSecret>,
    pub trapdoor: Option<Trapdoor>,
    /// The enrollment request this user sent; re-sent verbatim if the user
    /// ever tries to join again.
    pub join_request: Option<JoinRequest>,
}

impl UserRecord {
    pub fn is_member(&self) -> bool {
        self.msk.is_some() && self.trapdoor.is_some()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorldState {
    pub format: String,
    pub rng_seed: u64,
    pub params: SchemeParams,
    pub issuer: Option<IssuerKeyPair>,
    pub opener: Option<OpenerKeyPair>,
    pub authority: Option<DsKeyPair>,
    pub relayer_id: String,
    pub users: BTreeMap<String, UserRecord>,
    pub group: GroupState,
    pub ledger: Option<LedgerState>,
    /// Next stream index per actor name; bumped on every stream draw.
    pub rng_counters: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("world is already set up")]
    AlreadySetUp,
    #[error("world is not set up; run setup first")]
    NotSetUp,
    #[error("user {0} exists but is not a group member")]
    NotAMember(String),
    #[error("unknown user {0}")]
    UnknownUser(String),
    #[error("no announcement event with sequence {0}")]
    UnknownEvent(u64),
    #[error("issuer rejected the join request: {0}")]
    JoinRejected(#[source] IssError),
    #[error("issuer response failed the user's checks; nothing was stored")]
    IssuerResponseRejected,
    #[error("user {0} owns no funded account")]
    NoFundedAccount(String),
    #[error("{0}")]
    Ledger(#[from] LedgerError),
    #[error("{0}")]
    Sign(#[from] SignError),
    #[error("{0}")]
    State(String),
}

impl HarnessError {
    /// Stable process exit code for each failure class. 0 is success and 2
    /// is reserved for usage, I/O, and state-file problems.
    pub fn exit_code(&self) -> u8 {
        use HarnessError::*;
        match self {
            State(_) => 2,
            AlreadySetUp => 10,
            NotSetUp => 11,
            NotAMember(_) => 12,
            UnknownUser(_) => 13,
            UnknownEvent(_) => 14,
            JoinRejected(IssError::DuplicateF) => 20,
            JoinRejected(IssError::BadProof) => 21,
            JoinRejected(IssError::BadDsSig) => 22,
            IssuerResponseRejected => 23,
            NoFundedAccount(_) => 24,
            Ledger(e) => match e {
                LedgerError::NotInGroup => 30,
                LedgerError::BadAuthoritySig => 31,
                LedgerError::StaleAuthorityNonce => 32,
                LedgerError::RecipientNotInGroup => 33,
                LedgerError::BadSignature => 34,
                LedgerError::StaleNonce => 35,
                LedgerError::InsufficientFunds => 36,
                LedgerError::UnknownSenderAccount => 37,
                LedgerError::Overflow => 38,
                LedgerError::Forbidden => 39,
            },
            Sign(SignError::NotOwner) => 41,
        }
    }
}

impl WorldState {
    pub fn new(rng_seed: u64) -> Self {
        WorldState {
            format: STATE_FORMAT.to_string(),
            rng_seed,
            params: SchemeParams::bn254(),
            issuer: None,
            opener: None,
            authority: None,
            relayer_id: String::new(),
            users: BTreeMap::new(),
            group: GroupState::new(),
            ledger: None,
            rng_counters: BTreeMap::new(),
        }
    }

    pub fn is_set_up(&self) -> bool {
        self.ledger.is_some()
    }

    /// Fresh deterministic stream for one actor. Distinct actors never share
    /// a stream; repeated draws by the same actor get distinct streams.
    pub fn actor_rng(&mut self, actor: &str) -> ChaCha20Rng {
        let counter = self.rng_counters.entry(actor.to_string()).or_insert(0);
        let mut buf = Vec::with_capacity(RNG_STREAM_TAG.len() + 8 + actor.len() + 8);
        buf.extend_from_slice(RNG_STREAM_TAG);
        buf.extend_from_slice(&self.rng_seed.to_be_bytes());
        buf.extend_from_slice(actor.as_bytes());
        buf.extend_from_slice(&counter.to_be_bytes());
        *counter += 1;
        ChaCha20Rng::from_seed(keccak_digest(&buf))
    }

    pub fn ledger(&self) -> Result<&LedgerState, HarnessError> {
        self.ledger.as_ref().ok_or(HarnessError::NotSetUp)
    }

    pub fn ledger_mut(&mut self) -> Result<&mut LedgerState, HarnessError> {
        self.ledger.as_mut().ok_or(HarnessError::NotSetUp)
    }

    pub fn issuer(&self) -> Result<&IssuerKeyPair, HarnessError> {
        self.issuer.as_ref().ok_or(HarnessError::NotSetUp)
    }

    pub fn opener(&self) -> Result<&OpenerKeyPair, HarnessError> {
        self.opener.as_ref().ok_or(HarnessError::NotSetUp)
    }

    pub fn authority(&self) -> Result<&DsKeyPair, HarnessError> {
        self.authority.as_ref().ok_or(HarnessError::NotSetUp)
    }

    pub fn user(&self, id: &str) -> Result<&UserRecord, HarnessError> {
        self.users
            .get(id)
            .ok_or_else(|| HarnessError::UnknownUser(id.to_string()))
    }

    /// The user's record, requiring completed membership.
    pub fn member(&self, id: &str) -> Result<&UserRecord, HarnessError> {
        let rec = self.user(id)?;
        if !rec.is_member() {
            return Err(HarnessError::NotAMember(id.to_string()));
        }
        Ok(rec)
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("world serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_canonical_json())
            .map_err(|e| HarnessError::State(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::State(format!("cannot read {}: {e}", path.display())))?;
        let world: WorldState = serde_json::from_str(&raw)
            .map_err(|e| HarnessError::State(format!("cannot parse {}: {e}", path.display())))?;
        if world.format != STATE_FORMAT {
            return Err(HarnessError::State(format!(
                "unsupported state format {:?}, expected {:?}",
                world.format, STATE_FORMAT
            )));
        }
        Ok(world)
    }
}
