//! Seeded randomized equivalence harnesses.
//!
//! Each profile draws deterministic instances from a ChaCha stream, decides
//! the same property along two independent routes, and reports any
//! disagreement together with the instance for replay.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_identity, Identity};
use crate::analysis::{
    check_trace_form_associative, lemma2_alternative_criterion, lemma2_flexible_criterion,
    theorem1_extract,
};
use crate::construct::{
    build_unified, cay_rank2, cayley_dickson, split_coefficients, thakur_input, UnifiedInput,
};
use crate::error::Result;
use crate::forms::{
    CoefficientAlgebra, CrossProduct, DeterminantTrivialization, FreeRightModule,
    SesquilinearForm,
};
use crate::ring::{Ring, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzProfile {
    /// Flexibility/alternativity criteria vs. full symbolic identities.
    Lemma2,
    /// Trace-form associativity vs. flexibility for `D = R`.
    Remark2,
    /// Extract-and-rebuild roundtrips on random composition algebras.
    Theorem1,
}

impl FuzzProfile {
    pub fn name(&self) -> &'static str {
        match self {
            FuzzProfile::Lemma2 => "lemma2",
            FuzzProfile::Remark2 => "remark2",
            FuzzProfile::Theorem1 => "theorem1",
        }
    }

    pub fn from_name(name: &str) -> Option<FuzzProfile> {
        match name {
            "lemma2" => Some(FuzzProfile::Lemma2),
            "remark2" => Some(FuzzProfile::Remark2),
            "theorem1" => Some(FuzzProfile::Theorem1),
            _ => None,
        }
    }
}

/// One disagreement, with the instance for replay when it came from the
/// unified construction.
#[derive(Debug, Clone)]
pub struct FuzzFailure {
    pub index: usize,
    pub description: String,
    pub input: Option<UnifiedInput>,
}

#[derive(Debug, Clone)]
pub struct FuzzOutcome {
    pub profile: FuzzProfile,
    pub seed: u64,
    pub total: usize,
    pub agreements: usize,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzOutcome {
    pub fn all_agree(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(profile: FuzzProfile, seed: u64, count: usize) -> Result<FuzzOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome =
        FuzzOutcome { profile, seed, total: count, agreements: 0, failures: Vec::new() };
    for index in 0..count {
        let failure = match profile {
            FuzzProfile::Lemma2 => lemma2_sample(&mut rng, index)?,
            FuzzProfile::Remark2 => remark2_sample(&mut rng, index)?,
            FuzzProfile::Theorem1 => theorem1_sample(&mut rng, index)?,
        };
        match failure {
            None => outcome.agreements += 1,
            Some(f) => outcome.failures.push(f),
        }
    }
    Ok(outcome)
}

fn f7() -> Ring {
    Ring::prime_field(7).expect("7 is an odd prime")
}

fn random_scalar(rng: &mut ChaCha8Rng, ring: &Ring) -> Scalar {
    ring.from_i64(rng.gen_range(0..7))
}

/// A random hermitian Gram matrix over an etale coefficient algebra:
/// conj-symmetric off the diagonal, R-multiples of the unit on it.
fn random_hermitian_gram(
    rng: &mut ChaCha8Rng,
    coeff: &CoefficientAlgebra,
    s: usize,
) -> Vec<Vec<Vec<Scalar>>> {
    let ring = coeff.ring();
    let d = coeff.rank();
    let mut gram = vec![vec![vec![ring.zero(); d]; s]; s];
    for i in 0..s {
        gram[i][i] = coeff.lift(&random_scalar(rng, ring));
        for j in (i + 1)..s {
            let entry: Vec<Scalar> = (0..d).map(|_| random_scalar(rng, ring)).collect();
            gram[j][i] = coeff.conj(&entry);
            gram[i][j] = entry;
        }
    }
    gram
}

/// A random alternating tensor on a rank-`m` module.
fn random_alternating_tensor(rng: &mut ChaCha8Rng, ring: &Ring, m: usize) -> Vec<Vec<Vec<Scalar>>> {
    let mut tensor = vec![vec![vec![ring.zero(); m]; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                let value = random_scalar(rng, ring);
                tensor[i][j][k] = value.clone();
                tensor[j][i][k] = value.neg();
            }
        }
    }
    tensor
}

fn lemma2_sample(rng: &mut ChaCha8Rng, index: usize) -> Result<Option<FuzzFailure>> {
    let ring = f7();
    let coeff = split_coefficients(&ring);
    let s = rng.gen_range(1..=3usize);
    let module = FreeRightModule::new(coeff.clone(), s)?;
    let gram = random_hermitian_gram(rng, &coeff, s);
    let h = SesquilinearForm::new(module.clone(), gram)?;
    let tensor = random_alternating_tensor(rng, &ring, module.r_rank());
    let cross = CrossProduct::new(ring.clone(), tensor)?;

    let flexible_criterion = lemma2_flexible_criterion(&h, &cross)?;
    let alternative_criterion = lemma2_alternative_criterion(&h, &cross)?;
    let input = UnifiedInput::new(h, cross)?;
    let algebra = build_unified(&input)?;
    let flexible_full = check_identity(&algebra, Identity::Flexible);
    let alternative_full = check_identity(&algebra, Identity::Alternative);

    if flexible_criterion != flexible_full || alternative_criterion != alternative_full {
        return Ok(Some(FuzzFailure {
            index,
            description: format!(
                "s={s}: criterion (flexible={flexible_criterion}, alternative={alternative_criterion}) \
                 vs identities (flexible={flexible_full}, alternative={alternative_full})"
            ),
            input: Some(input),
        }));
    }
    Ok(None)
}

fn remark2_sample(rng: &mut ChaCha8Rng, index: usize) -> Result<Option<FuzzFailure>> {
    let ring = f7();
    let coeff = CoefficientAlgebra::base(&ring);
    let m = rng.gen_range(1..=4usize);
    let module = FreeRightModule::new(coeff, m)?;
    let mut b = vec![vec![ring.zero(); m]; m];
    for i in 0..m {
        b[i][i] = random_scalar(rng, &ring);
        for j in (i + 1)..m {
            let value = random_scalar(rng, &ring);
            b[i][j] = value.clone();
            b[j][i] = value;
        }
    }
    let h = SesquilinearForm::from_scalar_gram(module.clone(), &b)?;
    let tensor = random_alternating_tensor(rng, &ring, m);
    let cross = CrossProduct::new(ring.clone(), tensor)?;
    let input = UnifiedInput::new(h, cross)?;
    let algebra = build_unified(&input)?;

    let trace_assoc = check_trace_form_associative(&algebra)?;
    let flexible = check_identity(&algebra, Identity::Flexible);
    if trace_assoc != flexible {
        return Ok(Some(FuzzFailure {
            index,
            description: format!(
                "m={m}: trace form associative={trace_assoc} vs flexible={flexible}"
            ),
            input: Some(input),
        }));
    }
    Ok(None)
}

fn theorem1_sample(rng: &mut ChaCha8Rng, index: usize) -> Result<Option<FuzzFailure>> {
    let ring = f7();
    let nonzero = |rng: &mut ChaCha8Rng| ring.from_i64(rng.gen_range(1..7));
    // a random composition algebra of rank 2, 4 or 8
    let choice = rng.gen_range(0..4u32);
    let (label, algebra) = match choice {
        0 => {
            let c = nonzero(rng);
            (format!("etale c={c}"), cay_rank2(&ring, &c)?)
        }
        1 => {
            let c = nonzero(rng);
            let mu = nonzero(rng);
            let base = CoefficientAlgebra::new(cay_rank2(&ring, &c)?)?;
            (format!("quaternion c={c} mu={mu}"), cayley_dickson(&base, &mu)?)
        }
        2 => {
            let c = nonzero(rng);
            let mu1 = nonzero(rng);
            let mu2 = nonzero(rng);
            let base = CoefficientAlgebra::new(cay_rank2(&ring, &c)?)?;
            let quaternions = CoefficientAlgebra::new(cayley_dickson(&base, &mu1)?)?;
            (
                format!("octonion c={c} mu1={mu1} mu2={mu2}"),
                cayley_dickson(&quaternions, &mu2)?,
            )
        }
        _ => {
            let coeff = split_coefficients(&ring);
            let module = FreeRightModule::new(coeff.clone(), 3)?;
            let h = SesquilinearForm::identity(module);
            let alpha = DeterminantTrivialization::new(coeff.clone(), coeff.unit())?;
            ("split octonion".to_string(), build_unified(&thakur_input(&h, &alpha)?)?)
        }
    };
    let extraction = theorem1_extract(&algebra)?;
    if !extraction.conditions_hold || !extraction.rebuild_equal {
        return Ok(Some(FuzzFailure {
            index,
            description: format!(
                "{label}: conditions={} rebuild={}",
                extraction.conditions_hold, extraction.rebuild_equal
            ),
            input: None,
        }));
    }
    Ok(None)
}
