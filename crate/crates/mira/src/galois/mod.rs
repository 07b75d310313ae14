//! Finite-field arithmetic: the base field F_q, its extension F_{q^m} and the
//! lifted field F_{q^{mη}}, plus wire packing and XOF sampling of elements.

mod base;
mod ext;
mod lift;
mod pack;
pub(crate) mod poly;
mod sample;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use base::BaseField;
pub use ext::{ExtElement, ExtField, MAX_EXT_DEGREE};
pub use lift::LiftField;
pub use pack::{BitReader, BitWriter};
pub use sample::Sampler;

use crate::error::Result;

/// The three fields used by one parameter set, sharing a single base field.
#[derive(Debug, Clone)]
pub struct Fields {
    pub base: Arc<BaseField>,
    pub ext: Arc<ExtField>,
    pub lift: Arc<LiftField>,
}

impl Fields {
    /// Returns the (cached) field tower for (q, m, η). Modulus search is done
    /// once per process per triple.
    pub fn get(q: u16, m: usize, eta: usize) -> Result<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(u16, usize, usize), Fields>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&(q, m, eta)) {
            return Ok(f.clone());
        }
        let base = Arc::new(BaseField::new(q)?);
        let ext = Arc::new(ExtField::new(base.clone(), m)?);
        let lift = Arc::new(LiftField::new(ext.clone(), eta)?);
        let fields = Fields { base, ext, lift };
        cache.lock().unwrap().insert((q, m, eta), fields.clone());
        Ok(fields)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.ext.degree()
    }

    /// m·η, the number of F_q coefficients of a lifted element.
    #[inline]
    pub fn lift_degree(&self) -> usize {
        self.lift.degree()
    }
}
