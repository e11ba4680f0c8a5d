//! One member's full lifecycle against the raw library API. The README's
//! code sample is this file.

fn main() -> Result<(), Box<dyn std::error::Error>> {
    use nickpay_core::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    let params = SchemeParams::bn254();
    let mut rng = ChaCha20Rng::seed_from_u64(1);

    let issuer = ikg(&params, &mut rng);
    let opener = okg(&params, &mut rng);
    let user = ukg(&params, &mut rng);

    let mut group = GroupState::new();
    group.upk_table.insert("alice".into(), user.upk);
    let (msk, trapdoor, request) = join(&params, &user.usk, &issuer.ipk, &opener.opk, &mut rng);
    let mpk = iss(&params, &"alice".into(), &issuer.isk, &request, &opener.opk, &mut group)?;

    let nk = nick(&mpk, &mut rng);
    assert!(gvf(&params, &issuer.ipk, &nk)); // member nickname, 3 pairings
    let sig = sign(&nk, &msk, b"invoice 17", &mut rng)?;
    assert!(uvf(&nk, b"invoice 17", &sig)); // valid signature, 0 pairings
    assert!(trace(&params, &trapdoor, &nk)); // it's mine

    let (who, proof) = open(&params, &opener.osk, &nk, &group, &mut rng).unwrap();
    assert_eq!(who, "alice");
    assert!(judge(&params, &nk, &issuer.ipk, &who, &proof, &group));
    println!("lifecycle complete: {who} opened and judged");
    Ok(())
}
