use crate::ir::{
    Case, ClauseSpec, Entity, EntityId, EntityTable, HeadSpec, IrError, Number, Person,
    ReferenceMode, ReferenceSpec, SentencePlan,
};

/// Whether a pronoun for `other` could be read as referring to `e`.
fn competes(e: &Entity, other: &Entity) -> bool {
    other.id != e.id
        && other.person == Person::Third
        && other.number == e.number
        && (e.number == Number::Plural || other.gender == e.gender)
}

struct Context<'a> {
    entities: &'a EntityTable,
    /// Entities mentioned in the preceding sentence of the same paragraph.
    previous: Vec<EntityId>,
    /// Entities mentioned so far in the current sentence.
    current: Vec<EntityId>,
}

impl Context<'_> {
    fn blocked_by(&self, e: &Entity, ids: &[EntityId]) -> Result<bool, IrError> {
        for id in ids {
            if competes(e, self.entities.lookup(id)?) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn choose(&self, e: &Entity) -> Result<bool, IrError> {
        if e.person != Person::Third {
            return Ok(true);
        }
        if self.current.contains(&e.id) {
            return Ok(!self.blocked_by(e, &self.current)?);
        }
        if self.previous.contains(&e.id) {
            return Ok(!self.blocked_by(e, &self.previous)? && !self.blocked_by(e, &self.current)?);
        }
        Ok(false)
    }

    fn resolve(&mut self, r: &mut ReferenceSpec) -> Result<(), IrError> {
        let e = self.entities.lookup(&r.entity)?;
        *r = if self.choose(e)? {
            ReferenceSpec {
                entity: e.id.clone(),
                mode: ReferenceMode::Pronoun,
                case: r.case,
            }
        } else {
            ReferenceSpec::full(e, r.case)
        };
        self.current.push(e.id.clone());
        Ok(())
    }

    /// Visits references in surface order: condition, subject, complements.
    fn clause(&mut self, c: &mut ClauseSpec) -> Result<(), IrError> {
        if let Some(cond) = c.condition.as_deref_mut() {
            self.clause(cond)?;
        }
        self.resolve(&mut c.subject)?;
        for conj in &mut c.complements {
            for p in &mut conj.phrases {
                if let HeadSpec::Entity(r) = &mut p.head {
                    if r.entity == c.subject.entity {
                        r.mode = ReferenceMode::ReflexivePronoun;
                        r.case = Case::Objective;
                        self.current.push(r.entity.clone());
                    } else {
                        self.resolve(r)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Chooses referring expressions. A third-person mention becomes a pronoun
/// when the entity was mentioned earlier in the same sentence with no
/// same-gender, same-number entity mentioned before it in that sentence, or
/// when it was mentioned in the preceding sentence and no such competitor
/// appears there or earlier in the current sentence. First- and second-person
/// mentions are always pronouns. A complement naming the clause subject is
/// reflexive. Context resets at paragraph breaks.
pub fn pronominalize(
    mut plans: Vec<SentencePlan>,
    entities: &EntityTable,
) -> Result<Vec<SentencePlan>, IrError> {
    let mut ctx = Context {
        entities,
        previous: Vec::new(),
        current: Vec::new(),
    };
    let mut paragraph = None;
    for sp in &mut plans {
        if paragraph != Some(sp.paragraph) {
            ctx.previous.clear();
            paragraph = Some(sp.paragraph);
        }
        for c in &mut sp.clauses {
            ctx.clause(c)?;
        }
        ctx.previous = std::mem::take(&mut ctx.current);
    }
    Ok(plans)
}
