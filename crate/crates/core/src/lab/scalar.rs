use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive};

/// Real scalar the lab computations are generic over.
pub trait Scalar: Float + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in every float type")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {}
