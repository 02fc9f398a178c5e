pub mod curve_info;
pub mod dlt;
pub mod plurigenera;
pub mod verify;
