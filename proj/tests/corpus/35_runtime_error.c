int safeDiv(int a, int b) { return a / b; }

int main() {
  print_int(safeDiv(10, 3));
  print_int(safeDiv(1, 0));
  return 0;
}
