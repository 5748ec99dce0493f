// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Scalar traits shared by the generic numeric code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_integer::Integer;
use num_traits::{Float, FromPrimitive, Signed};

/// Integer type backing exact rationals (`i64`, `i128`, `BigInt`).
pub trait ExactInt:
    Integer + Signed + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Floating point type used by estimators and weighted sums (`f32`, `f64`).
pub trait RealScalar:
    Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn from_usize_lossy(value: usize) -> Self {
        Self::from_usize(value).expect("usize representable as float")
    }

    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("f64 representable as float")
    }
}

impl<T> RealScalar for T where
    T: Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

/// Neumaier compensated summation.
pub fn compensated_sum<T: RealScalar>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut compensation = T::zero();
    for value in values {
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation = compensation + ((sum - t) + value);
        } else {
            compensation = compensation + ((value - t) + sum);
        }
        sum = t;
    }
    sum + compensation
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1.0e16f64, 1.0, -1.0e16];
        assert_eq!(compensated_sum(values), 1.0);
        assert_eq!(compensated_sum::<f32>([0.5, 0.25]), 0.75);
    }
}
