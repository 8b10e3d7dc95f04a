//! Lists the model families and their parameters.

use parity_forge::gallery;

fn main() {
    for f in gallery::list() {
        println!("{}: {}", f.name, f.doc);
        for (k, default, doc) in f.params {
            println!("    {k} = {default}  {doc}");
        }
    }
}
