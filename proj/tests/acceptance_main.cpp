// Acceptance suite: placeholder, filled in after the unit suites pass.
int main() { return 1; }
