int search(int target) {
  int i, j;
  int found = -1;
  for (i = 0; i < 5; i++) {
    for (j = 0; j < 5; j++) {
      if (i * j == target) {
        found = i * 10 + j;
        break;
      }
    }
    if (found >= 0) break;
  }
  return found;
}

int main() {
  print_int(search(6));
  print_int(search(16));
  print_int(search(7));
  return 0;
}
