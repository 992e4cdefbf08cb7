use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::Result;
use crate::protocols::transcript::{ProtocolTranscript, TranscriptBuilder};
use crate::qstate::{haar_unitary, random_pure_state_on, seeded_rng, Party, PartyLayout, Role};

fn nonempty_subset(labels: &[String], rng: &mut impl Rng) -> Vec<String> {
    let k = rng.random_range(1..=labels.len());
    labels.choose_multiple(rng, k).cloned().collect()
}

/// A random pure state on `a0..` (Alice) and `b0..` (Bob), at most
/// `max_per_side` qubits each, followed by a local unitary, one transmission
/// of a random subset of one party's qubits, and a local unitary at the receiver.
pub fn random_transcript(seed: u64, max_per_side: usize) -> Result<ProtocolTranscript> {
    let mut rng = seeded_rng(seed);
    let max = max_per_side.max(1);
    let n_a = rng.random_range(1..=max);
    let n_b = rng.random_range(1..=max);
    let mut layout = PartyLayout::default();
    for i in 0..n_a {
        layout = layout.with(format!("a{i}"), Party::Alice, Role::S)?;
    }
    for i in 0..n_b {
        layout = layout.with(format!("b{i}"), Party::Bob, Role::S)?;
    }
    let initial = random_pure_state_on(layout, rng.random());
    let mut b = TranscriptBuilder::new(format!("random_{seed}"), initial)?;

    let sender = if rng.random_bool(0.5) { Party::Alice } else { Party::Bob };
    let targets = nonempty_subset(&b.current().layout().labels_of(sender), &mut rng);
    let u = haar_unitary(1 << targets.len(), &mut rng);
    b = b.unitary("local", u, &targets)?;

    let sent = nonempty_subset(&b.current().layout().labels_of(sender), &mut rng);
    b = b.transmit(&sent, sender, sender.other())?;

    let targets = nonempty_subset(&b.current().layout().labels_of(sender.other()), &mut rng);
    let u = haar_unitary(1 << targets.len(), &mut rng);
    Ok(b.unitary("local", u, &targets)?.finish())
}
