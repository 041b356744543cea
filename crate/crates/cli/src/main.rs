fn main() {
    println!("subsurf");
}
