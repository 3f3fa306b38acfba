struct pair { int a; long b; };

struct pair g;

void setPair(struct pair *p, int a, long b) {
  p->a = a;
  p->b = b;
}

long combine() {
  struct pair x;
  struct pair y;
  setPair(&x, 3, 40);
  y = x;
  y.a = y.a + 1;
  g = y;
  return x.a + y.a + g.b;
}

int main() {
  print_int(combine());
  print_int(g.a);
  return 0;
}
