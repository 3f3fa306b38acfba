struct point { int x; int y; };

int manhattan(struct point *a, struct point *b) {
  int dx = a->x - b->x;
  int dy = a->y - b->y;
  if (dx < 0) dx = -dx;
  if (dy < 0) dy = -dy;
  return dx + dy;
}

void translate(struct point *p, int dx, int dy) {
  p->x += dx;
  p->y += dy;
}

int main() {
  struct point p = {1, 2};
  struct point q;
  q.x = -4;
  q.y = 7;
  print_int(manhattan(&p, &q));
  translate(&p, 10, -10);
  print_int(p.x);
  print_int(p.y);
  print_int(manhattan(&p, &q));
  return 0;
}
