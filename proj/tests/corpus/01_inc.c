int inc(int input) { return input + 1; }

int main() {
  print_int(inc(41));
  print_int(inc(-1));
  print_int(inc(2147483647));
  return 0;
}
