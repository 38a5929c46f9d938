pub mod finmod;
pub mod howell;
pub mod int;
pub mod polyfp;
pub mod zmat;
