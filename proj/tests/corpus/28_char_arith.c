char rot(char c, int k) {
  if (c >= 'a' && c <= 'z') return (char)('a' + (c - 'a' + k) % 26);
  return c;
}

int checksum(char *s, int n) {
  char acc = 0;
  int i;
  for (i = 0; i < n; i++) acc = acc + s[i] * 7;
  return acc;
}

int main() {
  char w[5] = {'z', 'e', 'b', 'r', 'a'};
  int i;
  for (i = 0; i < 5; i++) putchar(rot(w[i], 13));
  putchar(10);
  print_int(checksum(w, 5));
  return 0;
}
