int counter = 0;
long total = 10;

void tick(int by) {
  counter += by;
  total = total * 2 + counter;
}

int main() {
  int i;
  for (i = 0; i < 5; i++) tick(i);
  print_int(counter);
  print_int(total);
  return 0;
}
