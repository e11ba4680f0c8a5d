//! The join protocol as an explicit message exchange. The user and the
//! issuer communicate only through the JSON envelopes defined here, so the
//! harness exercises the same serialization boundary a real deployment
//! would have.
//!
//! Message flow:
//!
//! 1. user    -> issuer: `JoinRequestEnvelope` (hex join request)
//! 2. issuer  -> user:   `JoinResponseEnvelope` (hex master public key)
//! 3. user: verifies the response before storing anything.
//!
//! A member who "joins" again re-sends their original request; the issuer
//! rejects it as a duplicate, which is the honest protocol outcome for a
//! replayed enrollment.

use crate::world::{HarnessError, UserRecord, WorldState};
use nickpay_core::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JoinRequestEnvelope {
    pub user_id: String,
    pub request: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JoinResponseEnvelope {
    pub user_id: String,
    pub mpk: String,
}

/// Secrets the user holds between sending the request and verifying the
/// response. Nothing lands in the world state until step 3 succeeds.
pub struct JoinDraft {
    pub msk: MasterSecret,
    pub trapdoor: Trapdoor,
    pub request: JoinRequest,
}

/// Issuer-side response faults, for exercising the user's step-3 checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinFault {
    None,
    /// Flip the v component of the returned mpk. The result still traces
    /// and still matches the user's exponent, but fails group verification.
    CorruptMpkV,
}

/// Step 1. Creates the user's long-term keys on first contact and publishes
/// the verification key where the issuer looks it up. A member re-sends
/// their stored request instead of minting a fresh one.
pub fn user_join_start(
    world: &mut WorldState,
    user_id: &str,
) -> Result<(JoinDraft, String), HarnessError> {
    world.issuer()?;
    if !world.users.contains_key(user_id) {
        let params = world.params.clone();
        let mut rng = world.actor_rng(&format!("user:{user_id}"));
        let keys = ukg(&params, &mut rng);
        world.group.upk_table.insert(user_id.to_string(), keys.upk);
        world.users.insert(
            user_id.to_string(),
            UserRecord { keys, msk: None, trapdoor: None, join_request: None },
        );
    }

    let rec = world.users.get(user_id).expect("just ensured");
    let membership = (rec.msk, rec.trapdoor, rec.join_request.clone());
    let draft = match membership {
        (Some(msk), Some(trapdoor), Some(request)) => {
            // Completed member: re-send the enrollment request on record.
            JoinDraft { msk, trapdoor, request }
        }
        (Some(_), _, None) => {
            return Err(HarnessError::State(format!(
                "member record for {user_id} has no stored join request"
            )));
        }
        _ => {
            let params = world.params.clone();
            let ipk = world.issuer()?.ipk;
            let opk = world.opener()?.opk;
            let usk = world.users.get(user_id).expect("just ensured").keys.usk;
            let mut rng = world.actor_rng(&format!("user:{user_id}"));
            let (msk, trapdoor, request) = join(&params, &usk, &ipk, &opk, &mut rng);
            JoinDraft { msk, trapdoor, request }
        }
    };

    let envelope = JoinRequestEnvelope {
        user_id: user_id.to_string(),
        request: hex::encode(draft.request.to_bytes()),
    };
    Ok((draft, serde_json::to_string(&envelope).expect("envelope serializes")))
}

/// Step 2. Parses the envelope, runs issuance, records the member, and
/// registers the master public key with the ledger. `fault` corrupts the
/// response on the way out, never the issuer's own records.
pub fn issuer_handle_join(
    world: &mut WorldState,
    request_json: &str,
    fault: JoinFault,
) -> Result<String, HarnessError> {
    let envelope: JoinRequestEnvelope = serde_json::from_str(request_json)
        .map_err(|e| HarnessError::State(format!("malformed join request envelope: {e}")))?;
    let raw = hex::decode(&envelope.request)
        .map_err(|e| HarnessError::State(format!("join request is not hex: {e}")))?;
    let request = JoinRequest::from_bytes(&raw)
        .map_err(|e| HarnessError::State(format!("join request does not decode: {e}")))?;

    if !world.group.upk_table.contains_key(&envelope.user_id) {
        return Err(HarnessError::UnknownUser(envelope.user_id.clone()));
    }

    let params = world.params.clone();
    let isk = world.issuer()?.isk;
    let opk = world.opener()?.opk;
    let mpk = iss(&params, &envelope.user_id, &isk, &request, &opk, &mut world.group)
        .map_err(HarnessError::JoinRejected)?;
    world
        .ledger_mut()?
        .register_mpk(Role::Issuer, &envelope.user_id, &mpk)?;

    let wire_mpk = match fault {
        JoinFault::None => mpk,
        JoinFault::CorruptMpkV => {
            let mut m = mpk;
            m.v = m.v.add(world.params.g());
            m
        }
    };
    let response = JoinResponseEnvelope {
        user_id: envelope.user_id,
        mpk: hex::encode(wire_mpk.to_bytes()),
    };
    Ok(serde_json::to_string(&response).expect("envelope serializes"))
}

/// Step 3. The user accepts the returned mpk only if it verifies as a group
/// member and is bound to their own exponent; otherwise nothing is stored.
pub fn user_join_finish(
    world: &mut WorldState,
    user_id: &str,
    draft: JoinDraft,
    response_json: &str,
) -> Result<MasterPublicKey, HarnessError> {
    let envelope: JoinResponseEnvelope = serde_json::from_str(response_json)
        .map_err(|e| HarnessError::State(format!("malformed join response envelope: {e}")))?;
    let raw = hex::decode(&envelope.mpk)
        .map_err(|e| HarnessError::State(format!("join response is not hex: {e}")))?;
    let Ok(mpk) = MasterPublicKey::from_bytes(&raw) else {
        return Err(HarnessError::IssuerResponseRejected);
    };

    let params = world.params.clone();
    let ipk = world.issuer()?.ipk;
    let nk: Nickname = mpk.clone().into();
    let accepted = gvf(&params, &ipk, &nk) && trace(&params, &draft.trapdoor, &nk);
    if !accepted {
        return Err(HarnessError::IssuerResponseRejected);
    }

    let rec = world
        .users
        .get_mut(user_id)
        .ok_or_else(|| HarnessError::UnknownUser(user_id.to_string()))?;
    rec.msk = Some(draft.msk);
    rec.trapdoor = Some(draft.trapdoor);
    rec.join_request = Some(draft.request);
    Ok(mpk)
}
