//! Shared fixture for integration tests: a complete world with issuer,
//! opener, minting authority, ledger, and enrollment/funding helpers.

// Each test binary uses its own subset of these helpers.
#![allow(dead_code)]

use nickpay_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub struct TestWorld {
    pub params: SchemeParams,
    pub issuer: IssuerKeyPair,
    pub opener: OpenerKeyPair,
    pub authority: DsKeyPair,
    pub group: GroupState,
    pub ledger: LedgerState,
    pub rng: ChaCha20Rng,
}

pub struct TestMember {
    pub id: String,
    pub keys: UserKeyPair,
    pub msk: MasterSecret,
    pub tau: Trapdoor,
    pub mpk: MasterPublicKey,
}

pub fn domain() -> TypedDomain {
    TypedDomain {
        name: "nickpay".to_string(),
        version: "1".to_string(),
        ledger_id: "itest".to_string(),
    }
}

pub fn world(seed: u64) -> TestWorld {
    let params = SchemeParams::bn254();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let issuer = ikg(&params, &mut rng);
    let opener = okg(&params, &mut rng);
    let authority = ds_keygen(&params, &mut rng);
    let ledger = LedgerState::new(params.clone(), domain(), issuer.ipk, authority.pk);
    TestWorld {
        params,
        issuer,
        opener,
        authority,
        group: GroupState::new(),
        ledger,
        rng,
    }
}

pub fn enroll(w: &mut TestWorld, id: &str) -> TestMember {
    let keys = ukg(&w.params, &mut w.rng);
    w.group.upk_table.insert(id.to_string(), keys.upk);
    let (msk, tau, req) = join(&w.params, &keys.usk, &w.issuer.ipk, &w.opener.opk, &mut w.rng);
    let mpk = iss(
        &w.params,
        &id.to_string(),
        &w.issuer.isk,
        &req,
        &w.opener.opk,
        &mut w.group,
    )
    .expect("honest join accepted");
    w.ledger
        .register_mpk(Role::Issuer, id, &mpk)
        .expect("issuer may register");
    TestMember {
        id: id.to_string(),
        keys,
        msk,
        tau,
        mpk,
    }
}

pub fn mint_tx(w: &mut TestWorld, recipient: &Nickname, amount: u128) -> MintTx {
    let nonce = w.ledger.authority_nonce();
    let digest = LedgerState::mint_digest(recipient, amount, nonce);
    let authority_sig = ds_sign(&w.params, &w.authority.sk, &digest, &mut w.rng);
    MintTx {
        recipient: recipient.clone(),
        amount,
        nonce,
        authority_sig,
    }
}

pub fn fund(w: &mut TestWorld, recipient: &Nickname, amount: u128) {
    let tx = mint_tx(w, recipient, amount);
    w.ledger.mint(&tx).expect("honest mint settles");
}

/// Typed message for a transfer from `sender`'s account at its current nonce.
pub fn message(
    w: &TestWorld,
    sender: &Nickname,
    recipient: &Nickname,
    amount: u128,
) -> TypedTransferMessage {
    TypedTransferMessage {
        domain: w.ledger.domain().clone(),
        body: TransferBody {
            sender: sender.clone(),
            recipient: recipient.clone(),
            amount,
            nonce: w.ledger.get_nonce(&nickname_address(sender)),
        },
    }
}
