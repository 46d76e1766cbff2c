use crate::ir::{ClauseSpec, EntityTable, IrError, Message};

pub const DEFAULT_MAX_CONJUNCTS: usize = 3;

/// Whether `b` may join the clause started by `a`: same subject, verb and
/// clause features, no condition on either, and both have complements.
fn mergeable(a: &Message, b: &Message) -> bool {
    a.condition.is_none()
        && b.condition.is_none()
        && !a.complements.is_empty()
        && !b.complements.is_empty()
        && a.subject == b.subject
        && a.verb == b.verb
        && a.tense == b.tense
        && a.modal == b.modal
        && a.polarity == b.polarity
        && a.adverbs == b.adverbs
}

/// Greedy left-to-right conjunction of adjacent compatible messages into
/// clauses of at most `max_conjuncts` conjuncts. Order is never changed.
pub fn aggregate(
    messages: &[&Message],
    entities: &EntityTable,
    max_conjuncts: usize,
) -> Result<Vec<ClauseSpec>, IrError> {
    let cap = max_conjuncts.max(1);
    let mut out: Vec<ClauseSpec> = Vec::new();
    let mut head: Option<&Message> = None;
    for &m in messages {
        let clause = ClauseSpec::from_message(m, entities)?;
        if let (Some(h), Some(last)) = (head, out.last_mut()) {
            if mergeable(h, m) && last.complements.len() < cap {
                last.complements.extend(clause.complements);
                continue;
            }
        }
        head = Some(m);
        out.push(clause);
    }
    Ok(out)
}
