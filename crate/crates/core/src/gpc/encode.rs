use crate::field::FieldElement;

use super::decode::{repair_base_rows, DecodeTrace, RowPlan};
use super::{ErasurePattern, GpcError, GpcParams, SymbolArray};

/// Systematic encoder. Data fills every cell outside
/// [`GpcParams::parity_positions`] in row-major order; parities are then
/// recovered as erasures with a triangulation computed once up front.
#[derive(Debug, Clone)]
pub struct Encoder {
    params: GpcParams,
    parity: ErasurePattern,
    data_positions: Vec<(usize, usize)>,
    plan: Option<RowPlan>,
}

impl Encoder {
    pub fn new(params: &GpcParams) -> Encoder {
        let parity = params.parity_positions();
        let (m, n) = (params.m(), params.n());
        let data_positions = (0..m)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| !parity.contains(r, c))
            .collect();
        let u0 = params.u()[0];
        let counts: Vec<usize> = parity.profile().entries().iter().fold(vec![0; m], |mut acc, &(r, e)| {
            acc[r] = if e > u0 { e } else { 0 };
            acc
        });
        let plan = if counts.iter().any(|&e| e > 0) {
            Some(RowPlan::build(params, &counts).expect("the parity layout is always decodable"))
        } else {
            None
        };
        Encoder {
            params: params.clone(),
            parity,
            data_positions,
            plan,
        }
    }

    pub fn params(&self) -> &GpcParams {
        &self.params
    }

    pub fn data_positions(&self) -> &[(usize, usize)] {
        &self.data_positions
    }

    pub fn parity_positions(&self) -> &ErasurePattern {
        &self.parity
    }

    pub fn encode(&self, data: &[FieldElement]) -> Result<SymbolArray, GpcError> {
        if data.len() != self.data_positions.len() {
            return Err(GpcError::DataLength {
                expected: self.data_positions.len(),
                got: data.len(),
            });
        }
        if let Some(x) = data.iter().find(|&&x| !self.params.field().contains(x)) {
            return Err(GpcError::SymbolOutOfField(x.value()));
        }
        let mut arr = SymbolArray::zeros(self.params.m(), self.params.n());
        for (&(r, c), &x) in self.data_positions.iter().zip(data) {
            arr.set(r, c, x);
        }
        arr.apply_erasures(&self.parity);
        let mut trace = DecodeTrace::default();
        repair_base_rows(&self.params, &mut arr, &mut trace);
        if let Some(plan) = &self.plan {
            plan.apply(&self.params, &mut arr, &mut trace);
        }
        Ok(arr)
    }

    /// Reads the data symbols back out of a complete array.
    pub fn extract(&self, arr: &SymbolArray) -> Result<Vec<FieldElement>, GpcError> {
        self.params.check_shape(arr)?;
        self.data_positions
            .iter()
            .map(|&(r, c)| arr.get(r, c).ok_or(GpcError::HasErasures))
            .collect()
    }
}
