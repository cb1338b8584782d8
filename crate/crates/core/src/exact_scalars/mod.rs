//! Exact scalar rings: rationals, cyclotomic fields, truncated p-adic
//! integers and their unramified extensions, with square classes and the
//! tame Hilbert symbol.

pub mod cyclotomic;
pub mod padic;
pub mod rational;
pub mod ring;
pub mod square;
pub mod unramified;

pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use padic::{PadicInt, Zp};
pub use rational::{rat, Rational, RationalField};
pub use ring::{LocalRing, Ring, RingDescriptor, SquareRing};
pub use square::{discriminant_class, hilbert_symbol, QpNumber, SquareClass};
pub use unramified::{Zq, ZqElem};
