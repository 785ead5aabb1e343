//! Generators for the worst-case families and random corpora, plus the JSON
//! instance format.

mod gadget;
mod hub_tree;
mod io;
mod random;

pub use gadget::gen_gadget;
pub use hub_tree::{gen_hub_tree, HubTree};
pub use io::{from_json_str, load_instance, save_instance, to_json_string, SCHEMA_VERSION};
pub use random::{gen_random_euclidean, RandomSpec};
