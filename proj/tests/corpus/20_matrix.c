int m[3][3];

void fill() {
  int i, j;
  for (i = 0; i < 3; i++)
    for (j = 0; j < 3; j++) m[i][j] = i * 3 + j + 1;
}

int trace() {
  int t = 0;
  int i;
  for (i = 0; i < 3; i++) t += m[i][i];
  return t;
}

void transpose() {
  int i, j;
  for (i = 0; i < 3; i++)
    for (j = i + 1; j < 3; j++) {
      int t = m[i][j];
      m[i][j] = m[j][i];
      m[j][i] = t;
    }
}

int main() {
  fill();
  print_int(trace());
  transpose();
  print_int(m[0][2]);
  print_int(m[2][0]);
  return 0;
}
