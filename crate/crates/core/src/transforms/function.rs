use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// Declared behaviour of a function of `x > 0` at both ends of the half-line:
/// `|f(x)| = O(x^(-origin_exponent))` as `x -> 0` and
/// `O(exp(-decay_rate x))` as `x -> inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrability {
    origin_exponent: f64,
    decay_rate: f64,
}

impl Integrability {
    pub fn new(origin_exponent: f64, decay_rate: f64) -> Result<Self> {
        if !(origin_exponent < 1.0) || !origin_exponent.is_finite() {
            return Err(Error::DivergentIntegral(origin_exponent));
        }
        if !(decay_rate > 0.0 && decay_rate.is_finite()) {
            return Err(Error::InvalidDecayHint(decay_rate));
        }
        Ok(Self {
            origin_exponent: origin_exponent.max(0.0),
            decay_rate,
        })
    }

    pub fn origin_exponent(&self) -> f64 {
        self.origin_exponent
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }
}

type Eval = dyn Fn(f64) -> f64 + Send + Sync;

/// A real function on `x > 0` with its integrability declaration.
///
/// Cloning is cheap; clones share the underlying closure.
#[derive(Clone)]
pub struct FunctionEvaluator {
    eval: Arc<Eval>,
    integrability: Integrability,
}

impl fmt::Debug for FunctionEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionEvaluator")
            .field("integrability", &self.integrability)
            .finish_non_exhaustive()
    }
}

impl FunctionEvaluator {
    pub fn new<F>(f: F, integrability: Integrability) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            integrability,
        }
    }

    /// Shorthand for [`FunctionEvaluator::new`] with a fresh declaration.
    pub fn with_behavior<F>(f: F, origin_exponent: f64, decay_rate: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Ok(Self::new(
            f,
            Integrability::new(origin_exponent, decay_rate)?,
        ))
    }

    /// `f(x) = exp(-x cosh u)`.
    pub fn laplace_kernel(u: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::Domain(format!("u must be finite, got {u}")));
        }
        let c = u.cosh();
        Self::with_behavior(move |x| (-x * c).exp(), 0.0, c)
    }

    pub fn zero() -> Self {
        Self::with_behavior(|_| 0.0, 0.0, 1.0).expect("valid declaration")
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn integrability(&self) -> Integrability {
        self.integrability
    }

    /// Same function, with values remembered by exact argument.
    ///
    /// Batch recovery integrates one `f` against many kernels; the adaptive
    /// rules revisit most nodes, so the cache removes the dominant cost when
    /// `f` is itself an integral.
    pub fn memoized(&self) -> Self {
        let inner = Arc::clone(&self.eval);
        let cache: Mutex<HashMap<u64, f64>> = Mutex::new(HashMap::new());
        Self::new(
            move |x| {
                let key = x.to_bits();
                if let Some(&v) = cache.lock().expect("cache lock").get(&key) {
                    return v;
                }
                let v = inner(x);
                cache.lock().expect("cache lock").insert(key, v);
                v
            },
            self.integrability,
        )
    }
}
