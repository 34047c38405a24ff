//! Materialize a plan into a truth table on `n` variables.

use rayon::prelude::*;

use crate::bf::truth_table::check_capacity;
use crate::bf::{concatenate, TruthTable};
use crate::constructor::plan::ConstructionPlan;
use crate::error::{Error, Result};
use crate::families::expand;

/// Block `b` of the result is the component assigned to `b`.
pub fn build(plan: &ConstructionPlan) -> Result<TruthTable> {
    if !plan.is_materialized() {
        return Err(Error::InvalidArgument(
            "plan has no block assignment; build needs a materialized plan".into(),
        ));
    }
    check_capacity(plan.n)?;
    let p = plan.half();
    if p < 6 {
        let blocks = (0..plan.phi.len())
            .map(|b| expand(plan.component(b)))
            .collect::<Result<Vec<_>>>()?;
        return concatenate(&blocks);
    }
    let per = 1usize << (p - 6);
    let mut out = TruthTable::zeros(plan.n)?;
    out.words_mut()
        .par_chunks_mut(per)
        .enumerate()
        .try_for_each(|(b, chunk)| -> Result<()> {
            let g = expand(plan.component(b))?;
            chunk.copy_from_slice(g.words());
            Ok(())
        })?;
    Ok(out)
}
