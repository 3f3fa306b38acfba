int foo(int sel, int x, int y) {
  int ret;
  if (sel == 1)
    ret = x;
  else
    ret = y;
  return ret;
}

int main() {
  int n = read_int();
  int i;
  for (i = 0; i < n; i++) print_int(foo(read_int(), 10, 20));
  return 0;
}
