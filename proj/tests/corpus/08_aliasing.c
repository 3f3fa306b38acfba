int alias() {
  int a, b, c, d;
  int *p;
  a = 0;
  p = &a;
  a = 1;
  b = *p;
  c = 0;
  p = &c;
  c = 1;
  *p = 3;
  d = c;
  return b * 10 + d;
}

int main() {
  print_int(alias());
  return 0;
}
