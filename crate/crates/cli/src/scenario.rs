//! Multi-actor scenario steps over a world, each producing a serializable
//! report. `run_script` drives a whole storyline and emits one transcript
//! record per step, with the conservation figures alongside so a transcript
//! is self-auditing.

use crate::actors::{issuer_handle_join, user_join_finish, user_join_start, JoinFault};
use crate::world::{HarnessError, WorldState};
use nickpay_core::*;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_LEDGER_ID: &str = "nickpay-main";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Step {
    Setup,
    Join { user: String },
    Mint { user: String, amount: u128 },
    Transfer { from: String, to: String, amount: u128 },
    Scan { user: String },
    Open { sequence: u64 },
    Audit { sequence: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SetupReport {
    pub ledger_id: String,
    pub issuer_pub: String,
    pub opener_pub: String,
    pub authority_pub: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct JoinReport {
    pub user: String,
    pub mpk: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MintReport {
    pub user: String,
    pub sequence: u64,
    pub amount: u128,
    pub address: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub from: String,
    pub to: String,
    pub amount: u128,
    pub sequence: u64,
    pub sender_address: String,
    pub recipient_address: String,
    pub relayer: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub sequence: u64,
    pub kind: EventKind,
    pub amount: u128,
    pub address: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub user: String,
    pub owned: Vec<ScanEntry>,
    /// Sum of amounts over owned announcement events.
    pub received_total: u128,
    /// Sum of current balances over owned accounts. Equals
    /// `received_total` exactly when the user has never sent.
    pub balance_total: u128,
    pub account_count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OpenReport {
    pub address: String,
    /// None when the nickname does not belong to any registered member.
    pub found: Option<String>,
    pub proof: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub address: String,
    pub found: Option<String>,
    /// The auditor's independent verdict on the opening proof; None when
    /// nothing was found to judge.
    pub verdict: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum StepReport {
    Setup(SetupReport),
    Join(JoinReport),
    Mint(MintReport),
    Transfer(TransferReport),
    Scan(ScanReport),
    Open(OpenReport),
    Audit(AuditReport),
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Ok { report: StepReport },
    Err { error: String, code: u8 },
}

/// One transcript line. `minted` and `balances` are the conservation pair
/// after the step; they must always be equal.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub index: u64,
    #[serde(flatten)]
    pub step: Step,
    pub outcome: Outcome,
    pub minted: u128,
    pub balances: u128,
}

pub fn run_setup(world: &mut WorldState, ledger_id: &str) -> Result<SetupReport, HarnessError> {
    if world.is_set_up() {
        return Err(HarnessError::AlreadySetUp);
    }
    let params = world.params.clone();
    let issuer = ikg(&params, &mut world.actor_rng("issuer"));
    let opener = okg(&params, &mut world.actor_rng("opener"));
    let authority = ds_keygen(&params, &mut world.actor_rng("authority"));
    let domain = TypedDomain {
        name: "nickpay".to_string(),
        version: "1".to_string(),
        ledger_id: ledger_id.to_string(),
    };
    world.ledger = Some(LedgerState::new(params, domain, issuer.ipk, authority.pk));
    world.issuer = Some(issuer);
    world.opener = Some(opener);
    world.authority = Some(authority);
    world.relayer_id = "relayer-0".to_string();
    Ok(SetupReport {
        ledger_id: ledger_id.to_string(),
        issuer_pub: hex::encode(issuer.ipk.to_bytes()),
        opener_pub: hex::encode(opener.opk.to_bytes()),
        authority_pub: hex::encode(authority.pk.to_bytes()),
    })
}

pub fn run_join(world: &mut WorldState, user: &str) -> Result<JoinReport, HarnessError> {
    run_join_with_fault(world, user, JoinFault::None)
}

/// The full three-message exchange. With a fault injected the issuer's
/// records update but the user keeps nothing, mirroring a response lost or
/// corrupted in transit.
pub fn run_join_with_fault(
    world: &mut WorldState,
    user: &str,
    fault: JoinFault,
) -> Result<JoinReport, HarnessError> {
    world.ledger()?;
    let (draft, request_json) = user_join_start(world, user)?;
    let response_json = issuer_handle_join(world, &request_json, fault)?;
    let mpk = user_join_finish(world, user, draft, &response_json)?;
    Ok(JoinReport { user: user.to_string(), mpk: hex::encode(mpk.to_bytes()) })
}

pub fn run_mint(world: &mut WorldState, user: &str, amount: u128) -> Result<MintReport, HarnessError> {
    world.ledger()?;
    world.member(user)?;
    let mpk = world
        .ledger()?
        .registered_mpk(user)
        .ok_or_else(|| HarnessError::NotAMember(user.to_string()))?
        .clone();
    let params = world.params.clone();
    let authority = *world.authority()?;
    // The recipient hands the authority a fresh nickname to be paid at.
    let recipient = nick(&mpk, &mut world.actor_rng(&format!("user:{user}")));
    let nonce = world.ledger()?.authority_nonce();
    let digest = LedgerState::mint_digest(&recipient, amount, nonce);
    let authority_sig = ds_sign(&params, &authority.sk, &digest, &mut world.actor_rng("authority"));
    let tx = MintTx { recipient: recipient.clone(), amount, nonce, authority_sig };
    let event = world.ledger_mut()?.mint(&tx)?;
    Ok(MintReport {
        user: user.to_string(),
        sequence: event.sequence,
        amount,
        address: nickname_address(&recipient).to_hex(),
    })
}

/// Picks the account the sender spends from: the lowest-addressed owned
/// account that covers the amount, falling back to the richest owned
/// account so an underfunded transfer fails inside the ledger rather than
/// up here.
fn pick_sender_account(
    world: &WorldState,
    from: &str,
    amount: u128,
) -> Result<Nickname, HarnessError> {
    let trapdoor = world
        .member(from)?
        .trapdoor
        .expect("member has a trapdoor");
    let ledger = world.ledger()?;
    let mut covering: Option<&Account> = None;
    let mut richest: Option<&Account> = None;
    for account in ledger.accounts().values() {
        if !trace(&world.params, &trapdoor, &account.nickname) {
            continue;
        }
        if covering.is_none() && account.balance >= amount {
            covering = Some(account);
        }
        let richer = richest.map_or(true, |r| account.balance > r.balance);
        if richer {
            richest = Some(account);
        }
    }
    covering
        .or(richest)
        .map(|a| a.nickname.clone())
        .ok_or_else(|| HarnessError::NoFundedAccount(from.to_string()))
}

pub fn run_transfer(
    world: &mut WorldState,
    from: &str,
    to: &str,
    amount: u128,
) -> Result<TransferReport, HarnessError> {
    world.ledger()?;
    let msk = world.member(from)?.msk.expect("member has a master secret");
    world.member(to)?;
    let recipient_mpk = world
        .ledger()?
        .registered_mpk(to)
        .ok_or_else(|| HarnessError::NotAMember(to.to_string()))?
        .clone();

    let sender = pick_sender_account(world, from, amount)?;
    // Payment request: the recipient derives the nickname the money goes to.
    let recipient = nick(&recipient_mpk, &mut world.actor_rng(&format!("user:{to}")));

    let ledger = world.ledger()?;
    let message = TypedTransferMessage {
        domain: ledger.domain().clone(),
        body: TransferBody {
            sender: sender.clone(),
            recipient: recipient.clone(),
            amount,
            nonce: ledger.get_nonce(&nickname_address(&sender)),
        },
    };
    let mtx = build_meta_tx(&message, &msk, &mut world.actor_rng(&format!("user:{from}")))?
        .with_relayer(&world.relayer_id);
    let relayer = mtx.relayer_id.clone();
    let event = execute(&mtx, world.ledger_mut()?)?;
    Ok(TransferReport {
        from: from.to_string(),
        to: to.to_string(),
        amount,
        sequence: event.sequence,
        sender_address: nickname_address(&sender).to_hex(),
        recipient_address: nickname_address(&recipient).to_hex(),
        relayer,
    })
}

pub fn run_scan(world: &mut WorldState, user: &str) -> Result<ScanReport, HarnessError> {
    world.ledger()?;
    let trapdoor = world.member(user)?.trapdoor.expect("member has a trapdoor");
    let params = world.params.clone();
    let ledger = world.ledger()?;
    let mut owned = Vec::new();
    let mut received_total: u128 = 0;
    for event in ledger.scan_events(0) {
        if trace(&params, &trapdoor, &event.recipient) {
            received_total = received_total
                .checked_add(event.amount)
                .ok_or_else(|| HarnessError::State("received total overflows".into()))?;
            owned.push(ScanEntry {
                sequence: event.sequence,
                kind: event.kind,
                amount: event.amount,
                address: nickname_address(&event.recipient).to_hex(),
            });
        }
    }
    let mut balance_total: u128 = 0;
    let mut account_count = 0u64;
    for account in ledger.accounts().values() {
        if trace(&params, &trapdoor, &account.nickname) {
            balance_total = balance_total
                .checked_add(account.balance)
                .ok_or_else(|| HarnessError::State("balance total overflows".into()))?;
            account_count += 1;
        }
    }
    Ok(ScanReport {
        user: user.to_string(),
        owned,
        received_total,
        balance_total,
        account_count,
    })
}

fn event_recipient(world: &WorldState, sequence: u64) -> Result<Nickname, HarnessError> {
    world
        .ledger()?
        .events()
        .get(sequence as usize)
        .map(|e| e.recipient.clone())
        .ok_or(HarnessError::UnknownEvent(sequence))
}

pub fn run_open(world: &mut WorldState, sequence: u64) -> Result<OpenReport, HarnessError> {
    let nk = event_recipient(world, sequence)?;
    run_open_nickname(world, &nk)
}

/// Supervisor-side opening of an arbitrary nickname. A nickname outside the
/// group is a NOT_FOUND report, not an error.
pub fn run_open_nickname(world: &mut WorldState, nk: &Nickname) -> Result<OpenReport, HarnessError> {
    let params = world.params.clone();
    let osk = world.opener()?.osk;
    let group = world.group.clone();
    let result = open(&params, &osk, nk, &group, &mut world.actor_rng("opener"));
    Ok(OpenReport {
        address: nickname_address(nk).to_hex(),
        found: result.as_ref().map(|(user, _)| user.clone()),
        proof: result.map(|(_, proof)| hex::encode(proof.to_bytes())),
    })
}

/// Tampering applied to the opening proof before it reaches the auditor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditFault {
    None,
    /// Corrupt the trapdoor-knowledge response inside the proof.
    TamperProof,
}

pub fn run_audit(world: &mut WorldState, sequence: u64) -> Result<AuditReport, HarnessError> {
    let nk = event_recipient(world, sequence)?;
    run_audit_nickname(world, &nk, AuditFault::None)
}

/// Supervisor opens, then an independent auditor judges the proof using
/// only public data: the nickname, issuer key, claimed identity, and the
/// group's public tables.
pub fn run_audit_nickname(
    world: &mut WorldState,
    nk: &Nickname,
    fault: AuditFault,
) -> Result<AuditReport, HarnessError> {
    let params = world.params.clone();
    let osk = world.opener()?.osk;
    let ipk = world.issuer()?.ipk;
    let group = world.group.clone();
    let opened = open(&params, &osk, nk, &group, &mut world.actor_rng("opener"));
    let (found, verdict) = match opened {
        None => (None, None),
        Some((user, mut proof)) => {
            if fault == AuditFault::TamperProof {
                proof.proof_open.z_hat = proof.proof_open.z_hat.add(world.params.g_hat());
            }
            let verdict = judge(&params, nk, &ipk, &user, &proof, &group);
            (Some(user), Some(verdict))
        }
    };
    Ok(AuditReport { address: nickname_address(nk).to_hex(), found, verdict })
}

pub fn run_step(world: &mut WorldState, step: &Step) -> Result<StepReport, HarnessError> {
    Ok(match step {
        Step::Setup => StepReport::Setup(run_setup(world, DEFAULT_LEDGER_ID)?),
        Step::Join { user } => StepReport::Join(run_join(world, user)?),
        Step::Mint { user, amount } => StepReport::Mint(run_mint(world, user, *amount)?),
        Step::Transfer { from, to, amount } => {
            StepReport::Transfer(run_transfer(world, from, to, *amount)?)
        }
        Step::Scan { user } => StepReport::Scan(run_scan(world, user)?),
        Step::Open { sequence } => StepReport::Open(run_open(world, *sequence)?),
        Step::Audit { sequence } => StepReport::Audit(run_audit(world, *sequence)?),
    })
}

/// Runs every step, recording outcomes and the conservation pair. Failures
/// are recorded and the script continues; the transcript is the result.
pub fn run_script(world: &mut WorldState, steps: &[Step]) -> Vec<StepRecord> {
    let mut records = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let outcome = match run_step(world, step) {
            Ok(report) => Outcome::Ok { report },
            Err(e) => Outcome::Err { error: e.to_string(), code: e.exit_code() },
        };
        let (minted, balances) = match &world.ledger {
            Some(l) => (l.total_minted(), l.balances_sum()),
            None => (0, 0),
        };
        records.push(StepRecord {
            index: i as u64,
            step: step.clone(),
            outcome,
            minted,
            balances,
        });
    }
    records
}

/// The storyline `demo` runs: every operation at least once, ending with an
/// audited transfer.
pub fn demo_script() -> Vec<Step> {
    vec![
        Step::Setup,
        Step::Join { user: "alice".into() },
        Step::Join { user: "bob".into() },
        Step::Mint { user: "alice".into(), amount: 100 },
        Step::Mint { user: "bob".into(), amount: 50 },
        Step::Transfer { from: "alice".into(), to: "bob".into(), amount: 40 },
        Step::Transfer { from: "bob".into(), to: "alice".into(), amount: 10 },
        Step::Scan { user: "alice".into() },
        Step::Scan { user: "bob".into() },
        Step::Open { sequence: 2 },
        Step::Audit { sequence: 2 },
    ]
}

/// Deterministic random storyline: setup, enroll and fund a five-user
/// group, then `extra` weighted-random steps. Steps that fail (duplicate
/// joins, underfunded transfers, out-of-range audits) are part of the
/// exercise and land in the transcript as recorded rejections.
pub fn random_script(seed: u64, extra: usize) -> Vec<Step> {
    let users = ["alice", "bob", "carol", "dave", "erin"];
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut steps = vec![Step::Setup];
    for u in users {
        steps.push(Step::Join { user: u.into() });
    }
    for u in users {
        steps.push(Step::Mint { user: u.into(), amount: 5_000 });
    }
    let pick = |rng: &mut ChaCha20Rng| users[(rng.next_u32() as usize) % users.len()].to_string();
    for i in 0..extra {
        let roll = rng.next_u32() % 100;
        let step = if roll < 8 {
            Step::Join { user: pick(&mut rng) }
        } else if roll < 38 {
            Step::Mint { user: pick(&mut rng), amount: 1 + (rng.next_u32() % 9_999) as u128 }
        } else if roll < 73 {
            Step::Transfer {
                from: pick(&mut rng),
                to: pick(&mut rng),
                amount: 1 + (rng.next_u32() % 12_000) as u128,
            }
        } else if roll < 86 {
            Step::Scan { user: pick(&mut rng) }
        } else if roll < 93 {
            Step::Open { sequence: rng.next_u64() % (11 + i as u64) }
        } else {
            Step::Audit { sequence: rng.next_u64() % (11 + i as u64) }
        };
        steps.push(step);
    }
    steps
}
